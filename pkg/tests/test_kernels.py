"""Tests for reproducing kernels and the two heat-kernel representations."""

import math

import numpy as np
import pytest

from conekernel.geometry import ConeParams, ConePoint, SurfaceParams, SurfacePoint, sample_pairs
from conekernel.kernels import (
    heat_batch,
    heat_cone_integral,
    heat_cone_series,
    heat_surface_integral,
    heat_surface_series,
    lambda_cone,
    lambda_surface,
    odd_term_residual,
    reproducing_cone,
    reproducing_surface,
)


def _cone_pair():
    p = ConePoint(x=np.array([0.2, 0.1]), t=0.6)
    q = ConePoint(x=np.array([0.1, -0.2]), t=0.5)
    return p, q


def _surface_pair():
    p = SurfacePoint(x=np.array([0.3, 0.4]), t=0.5)
    q = SurfacePoint(x=np.array([0.0, 0.7]), t=0.7)
    return p, q


def test_composite_indices():
    assert lambda_cone(ConeParams(d=2, mu=1.0, gamma=0.0)) == 2 * 1.5 + 0.0 + 0.5
    assert lambda_surface(SurfaceParams(d=3, gamma=2.0)) == 2.0 + 3 - 1.5


def test_reproducing_degree_zero_is_one():
    p, q = _cone_pair()
    out = reproducing_cone(0, ConeParams(d=2, mu=0.5, gamma=0.0), p, q)
    assert math.isclose(out.value, 1.0, abs_tol=1e-13)
    ps, qs = _surface_pair()
    out = reproducing_surface(0, SurfaceParams(d=2, gamma=0.0), ps, qs)
    assert math.isclose(out.value, 1.0, abs_tol=1e-13)


def test_heat_is_sum_of_reproducing_terms():
    params = ConeParams(d=2, mu=0.5, gamma=0.0)
    p, q = _cone_pair()
    tau = 0.7
    shift = 2 * params.mu + params.gamma + params.d
    total = 0.0
    for n in range(0, 30):
        term = reproducing_cone(n, params, p, q).value
        total += math.exp(-tau * n * (n + shift)) * term
        if abs(term) * math.exp(-tau * n * (n + shift)) < 1e-15 and n > 4:
            break
    direct = heat_cone_series(tau, params, p, q, tol=1e-13)
    assert math.isclose(total, direct.value, rel_tol=1e-10)


def test_representations_agree_cone():
    params = ConeParams(d=2, mu=1.0, gamma=0.5)
    p, q = _cone_pair()
    for tau in (0.3, 1.0, 4.0):
        a = heat_cone_series(tau, params, p, q, tol=1e-12)
        b = heat_cone_integral(tau, params, p, q, tol=1e-12)
        assert abs(a.value - b.value) <= a.error_budget + b.error_budget
        assert math.isclose(a.value, b.value, rel_tol=1e-9)


def test_representations_agree_surface_dirac():
    # d=2 surface: the v1 axis collapses to endpoint evaluation
    params = SurfaceParams(d=2, gamma=0.0)
    p, q = _surface_pair()
    for tau in (0.3, 1.0):
        a = heat_surface_series(tau, params, p, q, tol=1e-12)
        b = heat_surface_integral(tau, params, p, q, tol=1e-12)
        assert math.isclose(a.value, b.value, rel_tol=1e-9)


def test_heat_symmetric_in_arguments():
    params = ConeParams(d=2, mu=0.0, gamma=-0.5)
    p, q = _cone_pair()
    assert math.isclose(
        heat_cone_integral(1.0, params, p, q).value,
        heat_cone_integral(1.0, params, q, p).value,
        rel_tol=1e-12,
    )


def test_heat_large_tau_near_one():
    params = ConeParams(d=2, mu=1.0, gamma=0.0)
    p, q = _cone_pair()
    out = heat_cone_integral(50.0, params, p, q, tol=1e-13)
    assert abs(out.value - 1.0) <= 1e-10


def test_batch_matches_single_and_chunk_free():
    params = SurfaceParams(d=3, gamma=0.5)
    pairs = sample_pairs("surface", params, 2, seed=4)
    xs = np.array([p.x for p, _, _ in pairs])
    ts = np.array([p.t for p, _, _ in pairs])
    ys = np.array([q.x for _, q, _ in pairs])
    ss = np.array([q.t for _, q, _ in pairs])
    vals, tail, roundoff, meta = heat_batch(params, 1.0, xs, ts, ys, ss, tol=1e-11)
    assert meta["representation"] == "integral"
    for i, (p, q, _) in enumerate(pairs):
        single = heat_surface_integral(1.0, params, p, q, tol=1e-11)
        assert math.isclose(vals[i], single.value, rel_tol=1e-11)


def test_odd_term_residuals_vanish():
    params = ConeParams(d=2, mu=1.0, gamma=0.0)
    p, q = _cone_pair()
    for n in (1, 3, 5):
        assert abs(odd_term_residual(n, params, p, q)) <= 1e-12
    with pytest.raises(ValueError):
        odd_term_residual(2, params, p, q)


def test_rejects_bad_tau_and_dimension():
    params = ConeParams(d=2, mu=0.0, gamma=0.0)
    p, q = _cone_pair()
    with pytest.raises(ValueError):
        heat_cone_series(0.0, params, p, q)
    p3 = ConePoint(x=np.array([0.1, 0.0, 0.0]), t=0.5)
    with pytest.raises(ValueError):
        heat_cone_series(1.0, params, p3, q)

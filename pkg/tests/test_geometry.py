"""Tests for points, argument maps, distances, and the stratified sampler."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conekernel.geometry import (
    STRATA_CONE,
    STRATA_SURFACE,
    ConeParams,
    ConePoint,
    SurfaceParams,
    SurfacePoint,
    cs_gap,
    dist_cone,
    dist_surface,
    pairs_to_csv,
    sample_pairs,
    xi_cone,
    xi_surface,
)


def test_cone_params_validation():
    p = ConeParams(d=2, mu=1.0, gamma=0.5)
    assert p.alpha == 1.5
    with pytest.raises(ValueError):
        ConeParams(d=1, mu=0.0, gamma=0.0)
    with pytest.raises(ValueError):
        ConeParams(d=2, mu=-0.1, gamma=0.0)
    with pytest.raises(ValueError):
        ConeParams(d=2, mu=0.0, gamma=-0.6)


def test_point_validation():
    ConePoint(x=np.array([0.3, 0.0]), t=0.5)
    with pytest.raises(ValueError):
        ConePoint(x=np.array([0.6, 0.0]), t=0.5)
    with pytest.raises(ValueError):
        ConePoint(x=np.array([0.0, 0.0]), t=1.5)
    SurfacePoint(x=np.array([0.3, 0.4]), t=0.5)
    with pytest.raises(ValueError):
        SurfacePoint(x=np.array([0.3, 0.0]), t=0.5)


def test_xi_bounds_and_apex():
    p = ConePoint(x=np.array([0.2, 0.1]), t=0.6)
    q = ConePoint(x=np.array([-0.1, 0.3]), t=0.7)
    for u in (-1.0, 0.0, 1.0):
        for v1 in (-1.0, 0.5, 1.0):
            for v2 in (-1.0, 0.0, 1.0):
                assert -1.0 <= xi_cone(p, q, u, v1, v2) <= 1.0
    with pytest.raises(ValueError):
        xi_cone(p, q, 1.5, 0.0, 0.0)


def test_xi_at_unit_aux_gives_cos_distance():
    p = ConePoint(x=np.array([0.2, 0.1]), t=0.6)
    q = ConePoint(x=np.array([-0.1, 0.3]), t=0.7)
    assert math.isclose(xi_cone(p, q, 1.0, 1.0, 1.0), math.cos(dist_cone(p, q)), rel_tol=1e-14)
    ps = SurfacePoint(x=np.array([0.3, 0.4]), t=0.5)
    qs = SurfacePoint(x=np.array([0.0, 0.8]), t=0.8)
    assert math.isclose(xi_surface(ps, qs, 1.0, 1.0), math.cos(dist_surface(ps, qs)), rel_tol=1e-14)


def test_distance_basic_properties():
    p = ConePoint(x=np.array([0.2, 0.1]), t=0.6)
    apex = ConePoint(x=np.array([0.0, 0.0]), t=0.0)
    base = ConePoint(x=np.array([0.0, 0.0]), t=1.0)
    assert dist_cone(p, p) < 1e-7
    assert math.isclose(dist_cone(apex, apex), 0.0, abs_tol=1e-14)
    # apex and base center are extremal: the argument collapses to arccos(0)
    assert math.isclose(dist_cone(apex, base), math.pi / 2)


def test_distance_symmetry():
    rng = np.random.default_rng(3)
    for _ in range(20):
        t, s = rng.uniform(0.1, 1.0, 2)
        x = rng.uniform(-1, 1, 2)
        x *= t * rng.uniform(0, 1) / np.linalg.norm(x)
        y = rng.uniform(-1, 1, 2)
        y *= s * rng.uniform(0, 1) / np.linalg.norm(y)
        p, q = ConePoint(x=x, t=t), ConePoint(x=y, t=s)
        assert math.isclose(dist_cone(p, q), dist_cone(q, p), rel_tol=1e-14)


@given(
    t=st.floats(min_value=0.01, max_value=1.0),
    s=st.floats(min_value=0.01, max_value=1.0),
    rho_p=st.floats(min_value=0.0, max_value=1.0),
    rho_q=st.floats(min_value=0.0, max_value=1.0),
    ang=st.floats(min_value=0.0, max_value=2 * math.pi),
)
@settings(max_examples=300, deadline=None)
def test_inner_product_dominates_lateral_gap(t, s, rho_p, rho_q, ang):
    # st + <x,y> >= sqrt(t^2-|x|^2) sqrt(s^2-|y|^2) by Cauchy-Schwarz in R^{d+2}
    p = ConePoint(x=np.array([t * rho_p, 0.0]), t=t)
    q = ConePoint(x=s * rho_q * np.array([math.cos(ang), math.sin(ang)]), t=s)
    inner, lat = cs_gap(p, q)
    assert inner >= lat - 1e-12


def test_sample_pairs_deterministic_and_stratified():
    params = ConeParams(d=2, mu=0.5, gamma=0.0)
    a = sample_pairs("cone", params, 3, seed=7)
    b = sample_pairs("cone", params, 3, seed=7)
    assert len(a) == 3 * len(STRATA_CONE)
    for (p1, q1, s1), (p2, q2, s2) in zip(a, b):
        assert np.array_equal(p1.x, p2.x) and p1.t == p2.t
        assert np.array_equal(q1.x, q2.x) and q1.t == q2.t
        assert s1 == s2
    strata = {s for _, _, s in a}
    assert strata == set(STRATA_CONE)


def test_sample_pairs_surface_and_strata_filter():
    params = SurfaceParams(d=3, gamma=0.0)
    pairs = sample_pairs("surface", params, 2, seed=1, strata=("near_apex", "coincident"))
    assert len(pairs) == 4
    for p, q, s in pairs:
        assert s in ("near_apex", "coincident")
        assert math.isclose(np.linalg.norm(p.x), p.t, abs_tol=1e-12)
    with pytest.raises(ValueError):
        sample_pairs("surface", params, 2, seed=1, strata=("near_lateral",))
    assert set(STRATA_SURFACE) < set(STRATA_CONE)


def test_pairs_to_csv_roundtrip(tmp_path):
    params = ConeParams(d=2, mu=0.0, gamma=0.0)
    pairs = sample_pairs("cone", params, 2, seed=5)
    path = tmp_path / "pairs.csv"
    pairs_to_csv(pairs, path)
    rows = path.read_text().strip().splitlines()
    assert rows[0] == "x0,x1,t,y0,y1,s,stratum"
    assert len(rows) == 1 + len(pairs)
    first = rows[1].split(",")
    assert float(first[2]) == pairs[0][0].t

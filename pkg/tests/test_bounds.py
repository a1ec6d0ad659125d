"""Tests for the comparable expressions, lemma estimates, and the ratio scan."""

import math

import numpy as np
import pytest

from conekernel.bounds import (
    bound_cone,
    bound_surface,
    default_tau_grid,
    lnss1_pair,
    lnss2_pair,
    lnss3_pair,
    lnss4_check,
    lnss4_window,
    scan,
)
from conekernel.geometry import ConeParams, ConePoint, SurfaceParams, SurfacePoint
from conekernel.kernels import heat_cone_integral


def _cone_pair():
    p = ConePoint(x=np.array([0.2, 0.1]), t=0.6)
    q = ConePoint(x=np.array([0.1, -0.2]), t=0.5)
    return p, q


def test_bound_positive_and_tau_contract():
    params = ConeParams(d=2, mu=0.5, gamma=0.0)
    p, q = _cone_pair()
    assert bound_cone(1.0, params, p, q) > 0
    with pytest.raises(ValueError):
        bound_cone(5.0, params, p, q)
    with pytest.raises(ValueError):
        bound_cone(0.0, params, p, q)


def test_bound_brackets_kernel_at_moderate_tau():
    params = ConeParams(d=2, mu=0.5, gamma=0.0)
    p, q = _cone_pair()
    for tau in (0.2, 1.0, 4.0):
        h = heat_cone_integral(tau, params, p, q).value
        b = bound_cone(tau, params, p, q)
        ratio = h / b
        assert 1e-6 < ratio < 1e6


def test_bound_surface_apex_pair():
    params = SurfaceParams(d=2, gamma=0.0)
    p = SurfacePoint(x=np.array([0.3, 0.4]), t=0.5)
    apex = SurfacePoint(x=np.array([0.0, 0.0]), t=0.0)
    # st + <x,y> = 0: the power-of-inner factor is (tau)^(-d/2+1), still finite
    assert np.isfinite(bound_surface(0.5, params, p, apex))


def test_lnss1_pair_two_sided():
    for nu in (0.0, 1.0):
        for d_par in (0.05, 0.5, 5.0):
            lhs, rhs = lnss1_pair(nu, 0.1, 0.5, d_par)
            assert lhs > 0 and rhs > 0
            assert 1e-4 < lhs / rhs < 1e4


def test_lnss1_dirac_interpretation():
    lhs, rhs = lnss1_pair(-0.5, 0.0, 1.0, 0.3)
    assert math.isclose(lhs, 0.5 * math.exp(-math.acos(1.0) ** 2 / 0.3))


def test_lnss1_flat_case_ratio_is_half():
    # B = 0: the integrand is constant, the left side carries the half-mass of [0,1]
    lhs, rhs = lnss1_pair(1.0, 0.3, 0.0, 0.7)
    assert math.isclose(lhs, 0.5 * rhs, rel_tol=1e-12)


def test_lnss2_pair_two_sided_and_domain():
    lhs, rhs = lnss2_pair(1.0, 2.0, 0.5, 0.3)
    assert lhs > 0 and rhs > 0
    with pytest.raises(ValueError):
        lnss2_pair(-0.5, 2.0, 0.5, 0.3)
    with pytest.raises(ValueError):
        lnss2_pair(1.0, 0.5, 2.0, 0.3)


def test_lnss3_pair_small_angle():
    lhs, rhs = lnss3_pair(0.5, 1.0, 0.2)
    assert lhs > 0 and rhs > 0
    assert 1e-2 < lhs / (rhs * 0.5 ** (1.0 + 1.0)) < 1e8


def test_lnss4_one_sided():
    report = lnss4_window(kappas=(-1.0, 0.0, 2.0), n_tau=5, n_ang=8)
    assert report["max_ratio"] < 10.0
    lhs, rhs = lnss4_check(0.0, 1.0, 0.3, 0.3)
    assert math.isclose(lhs, rhs)


def test_default_tau_grid_limits():
    grid = default_tau_grid(0.1, 4.0, 5)
    assert len(grid) == 5
    assert math.isclose(grid[0], 0.1) and math.isclose(grid[-1], 4.0)


def test_scan_small_report_and_determinism(tmp_path):
    params = SurfaceParams(d=2, gamma=0.0)
    grid = [0.5, 2.0]
    csv_path = tmp_path / "scan.csv"
    rep1 = scan("surface", params, grid, samples_per_stratum=4, seed=3, csv_path=csv_path)
    rep2 = scan("surface", params, grid, samples_per_stratum=4, seed=3, threads=2)
    assert rep1.min_ratio > 0
    assert rep1.max_ratio >= rep1.min_ratio
    assert rep1.n_evals == len(grid) * 4 * 5
    assert rep1.min_ratio == rep2.min_ratio and rep1.max_ratio == rep2.max_ratio
    d = rep1.to_dict()
    assert d["schema"] == 1 and d["window"] == rep1.window
    header = csv_path.read_text().splitlines()[0]
    assert header == "tau,pair_index,stratum,kernel,bound,ratio,certified"


def test_scan_rejects_out_of_contract_tau():
    params = SurfaceParams(d=2, gamma=0.0)
    with pytest.raises(ValueError):
        scan("surface", params, [5.0], samples_per_stratum=2, seed=0)

"""Acceptance suite: one test per contract criterion, each printing a pass/fail line.

Run with `pytest -v -s tests/test_acceptance.py` to see the per-criterion lines.
"""

import math

import numpy as np
import pytest

from conekernel.bounds import lnss1_window, lnss2_window, lnss3_window, lnss4_window
from conekernel.geometry import ConeParams, SurfaceParams, sample_pairs
from conekernel.kernels import heat_batch, odd_term_residual
from conekernel.quadrature import pi_rule
from conekernel.selftest import (
    compute_windows,
    load_golden,
    mass_integral,
    pi_moment_oracle,
    semigroup_pair,
    tau_large_values,
)

THREADS = 4


def _report(name, ok, detail):
    print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def _pairs_arrays(pairs):
    xs = np.array([p.x for p, _, _ in pairs])
    ts = np.array([p.t for p, _, _ in pairs])
    ys = np.array([q.x for _, q, _ in pairs])
    ss = np.array([q.t for _, q, _ in pairs])
    return xs, ts, ys, ss


def _all_cells():
    cells = []
    for d in (2, 3):
        for mu in (0.0, 1.0):
            for gamma in (-0.5, 0.0, 2.0):
                cells.append(("cone", ConeParams(d=d, mu=mu, gamma=gamma)))
        for gamma in (-0.5, 0.0, 2.0):
            cells.append(("surface", SurfaceParams(d=d, gamma=gamma)))
    return cells


def test_cross_representation_equality():
    worst_rel = 0.0
    worst_excess = -math.inf
    for domain, params in _all_cells():
        pairs = sample_pairs(domain, params, 10, seed=0)[:50]
        xs, ts, ys, ss = _pairs_arrays(pairs)
        for tau in (0.3, 1.0, 4.0):
            v_i, tail_i, ro_i, _ = heat_batch(
                params, tau, xs, ts, ys, ss, representation="integral", tol=1e-12
            )
            v_s, tail_s, ro_s, _ = heat_batch(
                params, tau, xs, ts, ys, ss, representation="series", tol=1e-12
            )
            diff = np.abs(v_i - v_s)
            budget = tail_i + tail_s + ro_i + ro_s
            worst_excess = max(worst_excess, float((diff - budget).max()))
            scale = np.maximum(np.abs(v_i), np.abs(v_s))
            worst_rel = max(worst_rel, float((diff / scale).max()))
    _report(
        "cross-representation equality (18 cells, 50 pairs, tau in {0.3,1,4})",
        worst_excess <= 0.0 and worst_rel <= 1e-8,
        f"max excess over budget {worst_excess:.2e}, max rel diff {worst_rel:.2e}",
    )


def test_parity_vanishing():
    worst = 0.0
    for domain, params in (
        ("cone", ConeParams(d=2, mu=1.0, gamma=0.0)),
        ("cone", ConeParams(d=3, mu=0.0, gamma=-0.5)),
        ("surface", SurfaceParams(d=2, gamma=0.0)),  # Dirac branch of the v1 axis
        ("surface", SurfaceParams(d=3, gamma=2.0)),
    ):
        pairs = sample_pairs(domain, params, 4, seed=2)[:20]
        for p, q, _ in pairs:
            for n in (1, 3, 5):
                worst = max(worst, abs(odd_term_residual(n, params, p, q)))
    _report(
        "parity vanishing of odd terms (n in {1,3,5}, 20 pairs per domain)",
        worst <= 1e-12,
        f"max |residual| {worst:.2e}",
    )


def test_mass_conservation():
    worst = 0.0
    for domain, params in (
        ("cone", ConeParams(d=2, mu=1.0, gamma=0.0)),
        ("surface", SurfaceParams(d=2, gamma=0.0)),
    ):
        points = [p for p, _, _ in sample_pairs(domain, params, 2, seed=5)][:10]
        for p in points:
            for tau in (0.5, 1.0, 4.0):
                worst = max(worst, abs(mass_integral(params, tau, p) - 1.0))
    _report(
        "mass conservation (10 base points per domain, tau in {0.5,1,4})",
        worst <= 1e-6,
        f"max |mass - 1| {worst:.2e}",
    )


def test_semigroup_composition():
    worst = 0.0
    for domain, params in (
        ("cone", ConeParams(d=2, mu=1.0, gamma=0.0)),
        ("surface", SurfaceParams(d=2, gamma=0.0)),
    ):
        triples = sample_pairs(domain, params, 1, seed=6)[:5]
        for p, r, _ in triples:
            for tau1, tau2 in ((0.5, 0.5), (1.0, 2.0)):
                composed, direct = semigroup_pair(params, tau1, tau2, p, r)
                worst = max(worst, abs(composed - direct) / abs(direct))
    _report(
        "semigroup composition (d=2, 10 triples, (tau1,tau2) in {(0.5,0.5),(1,2)})",
        worst <= 1e-5,
        f"max rel err {worst:.2e}",
    )


@pytest.fixture(scope="module")
def current_windows():
    return compute_windows(samples_per_stratum=60, seed=0, threads=THREADS)


def test_comparability_windows(current_windows):
    golden = load_golden()
    assert golden is not None, "golden windows missing; run `conekernel scan --bless`"
    worst_growth = -math.inf
    worst_cell = ""
    ok = True
    details = []
    for key, pinned in golden["scan"].items():
        got = current_windows["scan"][key]
        if got["n_evals"] < 5000 or not got["min_ratio"] > 0 or not math.isfinite(got["window"]):
            ok = False
            details.append(f"{key} degenerate")
        growth = got["window"] / pinned["window"] - 1.0
        if growth > worst_growth:
            worst_growth, worst_cell = growth, key
    ok = ok and worst_growth <= 0.10
    _report(
        "comparability windows (12 cells, >=5000 evals each, pinned goldens)",
        ok,
        f"worst window growth {worst_growth:+.1%} ({worst_cell})" + "".join(details),
    )


def test_large_tau_regime():
    golden = load_golden()
    assert golden is not None and "tau_large" in golden
    got = tau_large_values(seed=0)
    lo = min(min(v) for cell in golden["tau_large"].values() for v in cell.values())
    hi = max(max(v) for cell in golden["tau_large"].values() for v in cell.values())
    worst_drift = 0.0
    worst_h50 = 0.0
    in_window = True
    for key, cell in golden["tau_large"].items():
        for tau_key, pinned_vals in cell.items():
            vals = got[key][tau_key]
            for pinned, val in zip(pinned_vals, vals):
                worst_drift = max(worst_drift, abs(val - pinned))
                in_window = in_window and lo - 1e-6 <= val <= hi + 1e-6
                if tau_key == "50.0":
                    worst_h50 = max(worst_h50, abs(val - 1.0))
    _report(
        "large-tau regime (tau in {4,8,50} pinned, |h_50 - 1| <= 1e-10)",
        worst_drift <= 1e-6 and in_window and worst_h50 <= 1e-10,
        f"max drift vs golden {worst_drift:.2e}, window [{lo:.6f}, {hi:.6f}], "
        f"max |h_50 - 1| {worst_h50:.2e}",
    )


def test_lemma_suites():
    golden = load_golden()
    assert golden is not None
    current = {
        "lnss1": lnss1_window(),
        "lnss2": lnss2_window(),
        "lnss3": lnss3_window(),
        "lnss4": lnss4_window(),
    }
    ok = True
    details = []
    for key in ("lnss1", "lnss2", "lnss3"):
        win = current[key]
        if win["n_configs"] < 1000 or not math.isfinite(win["window"]) or win["min_ratio"] <= 0:
            ok = False
        growth = win["window"] / golden["lemmas"][key]["window"] - 1.0
        ok = ok and growth <= 0.10
        details.append(f"{key} n={win['n_configs']} window {win['window']:.3e} ({growth:+.1%})")
    win4 = current["lnss4"]
    growth4 = win4["max_ratio"] / golden["lemmas"]["lnss4"]["max_ratio"] - 1.0
    ok = ok and math.isfinite(win4["max_ratio"]) and growth4 <= 0.10
    details.append(f"lnss4 n={win4['n_configs']} max {win4['max_ratio']:.3f} ({growth4:+.1%})")
    _report("lemma estimate suites (>=1000 configs each, pinned)", ok, "; ".join(details))


def test_quadrature_exactness():
    worst = 0.0
    for nu in (-0.49, 0.0, 0.5, 1.0, 2.5):
        for m in (4, 8, 12):
            rule = pi_rule(nu, m)
            for k in range(0, 2 * m):
                got = float(np.dot(rule.weights, rule.nodes**k))
                want = pi_moment_oracle(nu, k)
                worst = max(worst, abs(got - want))
    dirac = pi_rule(-0.5, 3)
    dirac_exact = (
        np.array_equal(dirac.nodes, [-1.0, 1.0])
        and np.array_equal(dirac.weights, [0.5, 0.5])
        and dirac.integrate(lambda w: w**6) == 1.0
        and dirac.integrate(lambda w: w**7) == 0.0
    )
    _report(
        "quadrature exactness (moments vs Beta oracle, Dirac branch exact)",
        worst <= 1e-13 and dirac_exact,
        f"max moment err {worst:.2e}, Dirac exact {dirac_exact}",
    )

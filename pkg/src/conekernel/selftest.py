"""Invariant checks shared by the test suite and the `selftest` CLI subcommand."""

from __future__ import annotations

import json
import math
from importlib import resources

import numpy as np
from scipy.special import betaln

from .bounds import (
    default_tau_grid,
    lnss1_window,
    lnss2_window,
    lnss3_window,
    lnss4_window,
    scan,
)
from .geometry import STRATA_CONE, STRATA_SURFACE, ConeParams, SurfaceParams, sample_pairs
from .kernels import exactness_orders, heat_batch, lambda_cone, lambda_surface, odd_term_residual
from .orthopoly import eval_jacobi, plan_budget
from .quadrature import cone_rule, pi_rule, surface_rule

__all__ = [
    "pi_moment_oracle",
    "mass_integral",
    "semigroup_pair",
    "cross_representation",
    "load_golden",
    "golden_path",
    "compute_windows",
    "run_quick",
    "run_full",
]

GOLDEN_RESOURCE = "golden_windows.json"


def pi_moment_oracle(nu, k):
    """int w^k dPi_nu by the Beta-function identity; 0 for odd k."""
    if k % 2 == 1:
        return 0.0
    if nu == -0.5:
        return 1.0
    return math.exp(betaln((k + 1) / 2.0, nu + 0.5) - betaln(0.5, nu + 0.5))


def _pairs_arrays(pairs):
    xs = np.array([p.x for p, _, _ in pairs])
    ts = np.array([p.t for p, _, _ in pairs])
    ys = np.array([q.x for _, q, _ in pairs])
    ss = np.array([q.t for _, q, _ in pairs])
    return xs, ts, ys, ss


def _field_orders(params, degree):
    """Cone/surface rule orders integrating a degree-`degree` polynomial field exactly."""
    m = degree // 2 + 2
    m_ang = degree + 4
    if isinstance(params, ConeParams):
        return (m, m, m_ang)
    return (m, m_ang)


def mass_integral(params, tau, p, tol=1e-9):
    """int h_tau(p, q) dnu(q) over the full domain; equals 1 by orthogonality."""
    lam = lambda_cone(params) if isinstance(params, ConeParams) else lambda_surface(params)
    n_series = (plan_budget(tau / 4.0, lam, tol=tol).truncation_n + 1) // 2
    if isinstance(params, ConeParams):
        rule = cone_rule(params, orders=_field_orders(params, n_series))
    else:
        rule = surface_rule(params, orders=_field_orders(params, n_series))
    ys, ss, ws = rule.points()
    n = len(ws)
    xs = np.broadcast_to(p.x, (n, p.d))
    ts = np.full(n, p.t)
    values, _, _, _ = heat_batch(params, tau, xs, ts, ys, ss, representation="integral", tol=tol)
    return float(np.dot(ws, values))


def semigroup_pair(params, tau1, tau2, p, r, tol=1e-10):
    """(composed, direct): quadrature composition of h_tau1, h_tau2 vs h_{tau1+tau2}."""
    lam = lambda_cone(params) if isinstance(params, ConeParams) else lambda_surface(params)
    n1 = (plan_budget(tau1 / 4.0, lam, tol=tol).truncation_n + 1) // 2
    n2 = (plan_budget(tau2 / 4.0, lam, tol=tol).truncation_n + 1) // 2
    if isinstance(params, ConeParams):
        rule = cone_rule(params, orders=_field_orders(params, n1 + n2))
    else:
        rule = surface_rule(params, orders=_field_orders(params, n1 + n2))
    qs_x, qs_t, ws = rule.points()
    n = len(ws)
    h1, _, _, _ = heat_batch(
        params, tau1, np.broadcast_to(p.x, (n, p.d)), np.full(n, p.t), qs_x, qs_t, tol=tol
    )
    h2, _, _, _ = heat_batch(
        params, tau2, qs_x, qs_t, np.broadcast_to(r.x, (n, r.d)), np.full(n, r.t), tol=tol
    )
    composed = float(np.dot(ws, h1 * h2))
    direct, _, _, _ = heat_batch(
        params, tau1 + tau2, p.x[None, :], np.array([p.t]), r.x[None, :], np.array([r.t]), tol=tol
    )
    return composed, float(direct[0])


def cross_representation(domain, params, tau, n_pairs=10, seed=0, tol=1e-12):
    """Max |series - integral| and max relative difference over sampled pairs."""
    pairs = sample_pairs(domain, params, max(1, n_pairs // 5), seed)
    xs, ts, ys, ss = _pairs_arrays(pairs)
    v_int, tail_i, ro_i, _ = heat_batch(params, tau, xs, ts, ys, ss, representation="integral", tol=tol)
    v_ser, tail_s, ro_s, _ = heat_batch(params, tau, xs, ts, ys, ss, representation="series", tol=tol)
    diff = np.abs(v_int - v_ser)
    budget = tail_i + tail_s + ro_i + ro_s
    scale = np.maximum(np.abs(v_int), np.abs(v_ser))
    return float(diff.max()), float((diff / scale).max()), float((diff - budget).max())


def golden_path():
    return resources.files("conekernel").joinpath("data", GOLDEN_RESOURCE)


def load_golden():
    """Pinned window constants; None when the file has not been blessed yet."""
    path = golden_path()
    if not path.is_file():
        return None
    return json.loads(path.read_text())


def _scan_cells():
    cells = []
    for mu in (0.0, 1.0):
        for gamma in (-0.5, 0.0, 2.0):
            cells.append(("cone", ConeParams(d=2, mu=mu, gamma=gamma)))
    for d in (2, 3):
        for gamma in (-0.5, 0.0, 2.0):
            cells.append(("surface", SurfaceParams(d=d, gamma=gamma)))
    return cells


def _cell_key(domain, params):
    if isinstance(params, ConeParams):
        return f"{domain}_d{params.d}_mu{params.mu}_g{params.gamma}"
    return f"{domain}_d{params.d}_g{params.gamma}"


def compute_windows(samples_per_stratum=60, seed=0, threads=1):
    """Recompute all pinned window constants (scan cells plus lemma grids)."""
    out = {"scan": {}, "lemmas": {}}
    tau_grid = default_tau_grid()
    for domain, params in _scan_cells():
        n_strata = len(STRATA_CONE if domain == "cone" else STRATA_SURFACE)
        # keep every cell at or above 5000 (pair, tau) evaluations
        per_stratum = max(samples_per_stratum, -(-5000 // (n_strata * len(tau_grid))))
        rep = scan(
            domain,
            params,
            tau_grid,
            samples_per_stratum=per_stratum,
            seed=seed,
            threads=threads,
        )
        out["scan"][_cell_key(domain, params)] = {
            "min_ratio": rep.min_ratio,
            "max_ratio": rep.max_ratio,
            "window": rep.window,
            "n_evals": rep.n_evals,
            "n_skipped": rep.n_skipped,
        }
    out["lemmas"]["lnss1"] = lnss1_window()
    out["lemmas"]["lnss2"] = lnss2_window()
    out["lemmas"]["lnss3"] = lnss3_window()
    out["lemmas"]["lnss4"] = lnss4_window()
    out["tau_large"] = tau_large_values(seed=seed)
    return out


def tau_large_values(taus=(4.0, 8.0, 50.0), seed=0):
    """Spot kernel values in the large-tau regime, for pinning; all sit near 1."""
    out = {}
    for domain, params in (
        ("cone", ConeParams(d=2, mu=1.0, gamma=0.0)),
        ("surface", SurfaceParams(d=2, gamma=0.0)),
    ):
        pairs = sample_pairs(domain, params, 1, seed, strata=("interior", "near_base", "antipodal"))
        xs, ts, ys, ss = _pairs_arrays(pairs)
        vals = {}
        for tau in taus:
            v, _, _, _ = heat_batch(params, tau, xs, ts, ys, ss, tol=1e-12)
            vals[str(tau)] = [float(x) for x in v]
        out[_cell_key(domain, params)] = vals
    return out


def _result(name, ok, detail):
    return {"name": name, "ok": bool(ok), "detail": detail}


def run_quick():
    """Fast invariants: quadrature exactness, parity, normalization, odd-term residuals."""
    results = []

    worst = 0.0
    for nu in (-0.49, 0.0, 0.5, 1.0, 2.5):
        rule = pi_rule(nu, 12)
        for k in range(0, 24):
            got = float(np.dot(rule.weights, rule.nodes**k))
            want = pi_moment_oracle(nu, k)
            worst = max(worst, abs(got - want))
    results.append(_result("pi_rule moments vs Beta oracle", worst < 1e-13, f"max err {worst:.2e}"))

    dirac = pi_rule(-0.5, 7)
    ok = np.array_equal(dirac.nodes, [-1.0, 1.0]) and np.array_equal(dirac.weights, [0.5, 0.5])
    results.append(_result("Dirac branch of pi_rule", ok, f"nodes {dirac.nodes}"))

    w = np.linspace(-1, 1, 101)
    worst = 0.0
    for n in (1, 4, 9, 20):
        for lam in (0.0, 0.5, 1.5, 3.0):
            worst = max(
                worst,
                float(np.max(np.abs(eval_jacobi(n, lam, -w) - (-1) ** n * eval_jacobi(n, lam, w)))),
            )
    results.append(_result("Jacobi parity", worst < 1e-12, f"max err {worst:.2e}"))

    worst = 0.0
    for params in (ConeParams(d=2, mu=0.5, gamma=0.0), ConeParams(d=3, mu=1.0, gamma=2.0)):
        rule = cone_rule(params, orders=(20, 20, 24))
        _, ts, ws = rule.points()
        p_exp = params.d + 2 * params.mu
        worst = max(worst, abs(float(ws.sum()) - 1.0))
        worst = max(
            worst, abs(float(np.dot(ws, ts)) - p_exp / (p_exp + params.gamma + 1.0))
        )
    for sparams in (SurfaceParams(d=2, gamma=0.0), SurfaceParams(d=3, gamma=0.0)):
        rule = surface_rule(sparams, orders=(20, 24))
        _, ts, ws = rule.points()
        worst = max(worst, abs(float(ws.sum()) - 1.0))
        worst = max(
            worst,
            abs(float(np.dot(ws, ts)) - (sparams.d - 1.0) / (sparams.d + sparams.gamma)),
        )
    results.append(_result("cone/surface rule normalization and t-moment", worst < 1e-10, f"max err {worst:.2e}"))

    worst = 0.0
    for domain, params in (
        ("cone", ConeParams(d=2, mu=1.0, gamma=0.0)),
        ("surface", SurfaceParams(d=2, gamma=0.0)),
    ):
        for p, q, _ in sample_pairs(domain, params, 2, seed=11):
            for n in (1, 3, 5):
                worst = max(worst, abs(odd_term_residual(n, params, p, q)))
    results.append(_result("odd-term residuals vanish", worst < 1e-12, f"max |residual| {worst:.2e}"))
    return results


def run_full(samples_per_stratum=60, seed=0, threads=1):
    """Quick checks plus cross-representation, mass, semigroup, and window regression."""
    results = run_quick()

    worst_rel = 0.0
    worst_excess = -math.inf
    for domain, params in (
        ("cone", ConeParams(d=2, mu=1.0, gamma=0.0)),
        ("cone", ConeParams(d=2, mu=0.0, gamma=-0.5)),
        ("surface", SurfaceParams(d=2, gamma=0.0)),
        ("surface", SurfaceParams(d=3, gamma=2.0)),
    ):
        for tau in (0.3, 1.0, 4.0):
            _, rel, excess = cross_representation(domain, params, tau, n_pairs=10, seed=seed)
            worst_rel = max(worst_rel, rel)
            worst_excess = max(worst_excess, excess)
    results.append(
        _result(
            "cross-representation equality",
            worst_rel < 1e-8 and worst_excess <= 0.0,
            f"max rel diff {worst_rel:.2e}, max excess over budget {worst_excess:.2e}",
        )
    )

    worst = 0.0
    for params in (ConeParams(d=2, mu=1.0, gamma=0.0), SurfaceParams(d=2, gamma=0.0)):
        domain = "cone" if isinstance(params, ConeParams) else "surface"
        for p, _, _ in sample_pairs(domain, params, 2, seed=seed + 1)[:4]:
            for tau in (0.5, 1.0, 4.0):
                worst = max(worst, abs(mass_integral(params, tau, p) - 1.0))
    results.append(_result("mass conservation", worst < 1e-6, f"max |mass - 1| {worst:.2e}"))

    worst = 0.0
    for params in (ConeParams(d=2, mu=1.0, gamma=0.0), SurfaceParams(d=2, gamma=0.0)):
        domain = "cone" if isinstance(params, ConeParams) else "surface"
        pairs = sample_pairs(domain, params, 2, seed=seed + 2)
        for p, r, _ in pairs[:3]:
            for tau1, tau2 in ((0.5, 0.5), (1.0, 2.0)):
                composed, direct = semigroup_pair(params, tau1, tau2, p, r)
                worst = max(worst, abs(composed - direct) / abs(direct))
    results.append(_result("semigroup composition", worst < 1e-5, f"max rel err {worst:.2e}"))

    golden = load_golden()
    if golden is None:
        results.append(_result("window regression", False, "no golden file; run `scan --bless`"))
    else:
        current = compute_windows(samples_per_stratum=samples_per_stratum, seed=seed, threads=threads)
        worst_growth = 0.0
        worst_cell = ""
        for key, pinned in golden["scan"].items():
            got = current["scan"][key]["window"]
            growth = got / pinned["window"] - 1.0
            if growth > worst_growth:
                worst_growth, worst_cell = growth, key
        for key, pinned in golden["lemmas"].items():
            ref = pinned.get("window", pinned["max_ratio"])
            got = current["lemmas"][key].get("window", current["lemmas"][key]["max_ratio"])
            growth = got / ref - 1.0
            if growth > worst_growth:
                worst_growth, worst_cell = growth, key
        results.append(
            _result(
                "window regression vs pinned constants",
                worst_growth <= 0.10,
                f"worst growth {worst_growth:+.1%} ({worst_cell or 'none'})",
            )
        )
    return results

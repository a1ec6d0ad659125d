"""Closed-form comparable expressions, lemma-level estimates, and ratio scans."""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .geometry import (
    ConeParams,
    SurfaceParams,
    _pair_invariants,
    dist_cone_raw,
    dist_surface_raw,
    sample_pairs,
)
from .kernels import heat_batch
from .orthopoly import heat_1d
from .quadrature import gauss_jacobi, log_pi_const

__all__ = [
    "RatioReport",
    "bound_cone",
    "bound_surface",
    "bound_cone_raw",
    "bound_surface_raw",
    "lnss1_pair",
    "lnss2_pair",
    "lnss3_pair",
    "lnss4_check",
    "lnss1_window",
    "lnss2_window",
    "lnss3_window",
    "lnss4_window",
    "default_tau_grid",
    "scan",
]

# ratios are only recorded where the kernel value clears its roundoff floor by this factor
_FLOOR_FACTOR = 30.0


@dataclass(frozen=True)
class RatioReport:
    """Min/max kernel-to-bound ratios over a stratified scan."""

    domain: str
    params: dict
    tau_grid: list
    n_pairs: int
    n_evals: int
    n_skipped: int
    min_ratio: float
    max_ratio: float
    argmin: dict
    argmax: dict
    seed: int
    wall_time: float
    schema: int = 1

    @property
    def window(self):
        return self.max_ratio / self.min_ratio

    def to_dict(self):
        return {
            "schema": self.schema,
            "domain": self.domain,
            "params": self.params,
            "tau_grid": list(self.tau_grid),
            "n_pairs": self.n_pairs,
            "n_evals": self.n_evals,
            "n_skipped": self.n_skipped,
            "min_ratio": self.min_ratio,
            "max_ratio": self.max_ratio,
            "window": self.window,
            "argmin": self.argmin,
            "argmax": self.argmax,
            "seed": self.seed,
            "wall_time": self.wall_time,
        }


def _check_tau_bound(tau):
    if not 0.0 < tau <= 4.0:
        raise ValueError(f"bound formulas are stated for tau in (0, 4], got {tau}")


def bound_cone_raw(tau, params: ConeParams, xs, ts, ys, ss):
    """Vectorized comparable expression for the solid-cone heat kernel."""
    _check_tau_bound(tau)
    inner, lat, edge = _pair_invariants(xs, ts, ys, ss)
    inner = np.maximum(inner, 0.0)
    # st + <x,y> dominates the lateral product, so the quotient vanishes with it
    with np.errstate(divide="ignore", invalid="ignore"):
        lat_q = np.where(inner > 0.0, lat / np.sqrt(np.where(inner > 0.0, inner, 1.0)), 0.0)
    dist = dist_cone_raw(xs, ts, ys, ss)
    a, mu, g = params.alpha, params.mu, params.gamma
    log_val = (
        (-a + mu - 1.0) * math.log(tau)
        + (-g - 0.5) * np.log(np.maximum(edge, tau))
        + (-a) * np.log(np.maximum(np.sqrt(inner), tau))
        + (-mu) * np.log(np.maximum(lat_q, tau))
        - dist**2 / tau
    )
    return np.exp(log_val)


def bound_surface_raw(tau, params: SurfaceParams, xs, ts, ys, ss):
    """Vectorized comparable expression for the conic-surface heat kernel."""
    _check_tau_bound(tau)
    inner, _, edge = _pair_invariants(xs, ts, ys, ss)
    inner = np.maximum(inner, 0.0)
    dist = dist_surface_raw(xs, ts, ys, ss)
    d, g = params.d, params.gamma
    log_val = (
        (-d / 2.0) * math.log(tau)
        + (-g - 0.5) * np.log(np.maximum(edge, tau))
        + (-d / 2.0 + 1.0) * np.log(np.maximum(np.sqrt(inner), tau))
        - dist**2 / tau
    )
    return np.exp(log_val)


def bound_cone(tau, params: ConeParams, p, q):
    """Comparable expression of the solid-cone estimate at a single pair."""
    return float(bound_cone_raw(tau, params, p.x[None, :], np.array([p.t]), q.x[None, :], np.array([q.t]))[0])


def bound_surface(tau, params: SurfaceParams, p, q):
    """Comparable expression of the surface estimate at a single pair."""
    return float(
        bound_surface_raw(tau, params, p.x[None, :], np.array([p.t]), q.x[None, :], np.array([q.t]))[0]
    )


# ---------------------------------------------------------------------------
# Lemma-level estimates


def _lnss1_log_pair(nu, a_par, b_par, d_par, order=200):
    """(log lhs, log rhs) with the common exp(-Phi(1)^2/D) factor handled in logs."""
    if not 0.0 <= b_par <= 1.0:
        raise ValueError("B must lie in [0, 1]")
    if not -1.0 <= a_par <= 1.0 - b_par + 1e-12:
        raise ValueError("A must lie in [-1, 1-B]")
    if not d_par > 0.0:
        raise ValueError("D must be > 0")
    if nu < -0.5:
        raise ValueError("nu must be >= -1/2")
    phi1 = math.acos(min(a_par + b_par, 1.0))
    if nu == -0.5:
        # restriction of the Dirac mean to [0,1]: the single atom at w=1, weight 1/2
        log_lhs = math.log(0.5) - phi1**2 / d_par
    else:
        nodes, weights = gauss_jacobi(order, nu - 0.5, 0.0)
        w01 = 0.5 * (nodes + 1.0)
        mu0 = 1.0 / (nu + 0.5)  # int_0^1 (1-w)^(nu-1/2) dw
        phi = np.arccos(np.clip(a_par + b_par * w01, -1.0, 1.0))
        integrand = np.exp(-(phi**2 - phi1**2) / d_par) * (1.0 + w01) ** (nu - 0.5)
        val = float(np.dot(weights, integrand)) * mu0 * math.exp(log_pi_const(nu))
        log_lhs = math.log(val) - phi1**2 / d_par
    denom = 0.0 if b_par == 0.0 else b_par / (math.pi - phi1)
    log_rhs = (nu + 0.5) * (math.log(d_par) - math.log(denom + d_par)) - phi1**2 / d_par
    return log_lhs, log_rhs


def lnss1_pair(nu, a_par, b_par, d_par, order=200):
    """Endpoint-concentration estimate: integral of exp(-arccos(A+Bw)^2/D) over [0,1]."""
    log_lhs, log_rhs = _lnss1_log_pair(nu, a_par, b_par, d_par, order=order)
    return math.exp(log_lhs), math.exp(log_rhs)


def _lnss2_log_pair(nu, phi0, phi1, d_par, order=200):
    if not (0.0 <= phi1 < phi0 <= math.pi):
        raise ValueError("need 0 <= phi1 < phi0 <= pi")
    if not d_par > 0.0:
        raise ValueError("D must be > 0")
    if nu <= -0.5:
        raise ValueError("nu must be > -1/2 (the endpoint weight is not integrable at -1/2)")
    c0, c1 = math.cos(phi0), math.cos(phi1)
    # substitute c = cos(psi); the endpoint singularity becomes a Jacobi weight at c1
    nodes, weights = gauss_jacobi(order, nu - 0.5, 0.0)
    c = c0 + 0.5 * (nodes + 1.0) * (c1 - c0)
    mu0 = (c1 - c0) ** (nu + 0.5) / (nu + 0.5)
    psi = np.arccos(np.clip(c, -1.0, 1.0))
    integrand = np.exp(-(psi**2 - phi1**2) / d_par)
    log_lhs = math.log(float(np.dot(weights, integrand)) * mu0) - phi1**2 / d_par
    q = (phi0 - phi1) * phi0
    log_rhs = (
        (nu + 0.5) * (math.log(d_par) + math.log(math.pi - phi1) + math.log(q) - math.log(q + d_par))
        - phi1**2 / d_par
    )
    return log_lhs, log_rhs


def lnss2_pair(nu, phi0, phi1, d_par, order=200):
    """Singular-endpoint integral estimate over [phi1, phi0]."""
    log_lhs, log_rhs = _lnss2_log_pair(nu, phi0, phi1, d_par, order=order)
    return math.exp(log_lhs), math.exp(log_rhs)


def lnss3_pair(tau, lam, psi, tol=1e-12):
    """One-dimensional heat kernel at cos(psi) against its comparable expression."""
    if not 0.0 <= psi <= math.pi:
        raise ValueError("psi must lie in [0, pi]")
    lhs = heat_1d(tau / 4.0, lam, math.cos(psi), tol=tol).value
    rhs = tau ** (-lam - 1.0) * (tau + math.pi - psi) ** (-lam - 0.5) * math.exp(-psi**2 / tau)
    return lhs, rhs


def lnss4_check(kappa, tau, theta, eta):
    """One-sided monotonicity estimate; callers assert lhs <= C * rhs."""
    if not 0.0 <= theta <= eta <= math.pi:
        raise ValueError("need 0 <= theta <= eta <= pi")
    if not tau > 0.0:
        raise ValueError("tau must be > 0")
    lhs = (tau + math.pi - eta) ** kappa * math.exp(-(eta**2) / tau)
    rhs = (tau + math.pi - theta) ** kappa * math.exp(-(theta**2) / tau)
    return lhs, rhs


def _window_from_logs(log_ratios):
    log_ratios = np.asarray(log_ratios)
    return {
        "min_ratio": float(np.exp(log_ratios.min())),
        "max_ratio": float(np.exp(log_ratios.max())),
        "window": float(np.exp(log_ratios.max() - log_ratios.min())),
        "n_configs": int(log_ratios.size),
    }


def lnss1_window(nus=(-0.49, 0.0, 0.5, 1.0, 2.5), n_b=8, n_a=6, n_d=7):
    """Two-sided ratio window for the endpoint-concentration estimate over a grid."""
    logs = []
    d_grid = np.logspace(-2, 1, n_d)
    for nu in nus:
        for b_par in np.linspace(0.0, 1.0, n_b):
            for a_par in np.linspace(-1.0, 1.0 - b_par, n_a):
                for d_par in d_grid:
                    ll, lr = _lnss1_log_pair(nu, a_par, b_par, d_par)
                    logs.append(ll - lr)
    return _window_from_logs(logs)


def lnss1_window_dirac(n_b=12, n_a=10, n_d=9):
    """Separate report for the nu=-1/2 interpretation (atom at w=1, weight 1/2)."""
    logs = []
    d_grid = np.logspace(-2, 1, n_d)
    for b_par in np.linspace(0.0, 1.0, n_b):
        for a_par in np.linspace(-1.0, 1.0 - b_par, n_a):
            for d_par in d_grid:
                ll, lr = _lnss1_log_pair(-0.5, a_par, b_par, d_par)
                logs.append(ll - lr)
    return _window_from_logs(logs)


def lnss2_window(nus=(0.0, 0.5, 1.0, 2.5), n_phi=10, n_d=7):
    """Two-sided ratio window for the singular-endpoint estimate over a grid."""
    logs = []
    d_grid = np.logspace(-2, 1, n_d)
    phis = np.linspace(0.0, math.pi, n_phi)
    for nu in nus:
        for i, phi1 in enumerate(phis[:-1]):
            for phi0 in phis[i + 1 :]:
                for d_par in d_grid:
                    ll, lr = _lnss2_log_pair(nu, phi0, phi1, d_par)
                    logs.append(ll - lr)
    return _window_from_logs(logs)


def lnss3_window(lams=(0.0, 0.5, 1.5, 3.0), n_tau=12, n_psi=24):
    """Two-sided ratio window for the one-dimensional kernel estimate.

    psi is capped at sqrt(20*tau): beyond it the alternating series cancels below
    the float64 roundoff floor and the computed value carries no information.
    """
    logs = []
    for lam in lams:
        for tau in np.logspace(math.log10(0.05), math.log10(4.0), n_tau):
            psi_max = min(math.pi, math.sqrt(20.0 * tau))
            for psi in np.linspace(0.0, psi_max, n_psi):
                lhs, rhs = lnss3_pair(tau, lam, psi)
                logs.append(math.log(lhs) - math.log(rhs))
    return _window_from_logs(logs)


def lnss4_window(kappas=(-3.0, -1.0, 0.0, 1.0, 2.5), n_tau=8, n_ang=12):
    """One-sided constant for the monotonicity estimate: max over the grid of lhs/rhs."""
    worst = -math.inf
    n_configs = 0
    for kappa in kappas:
        for tau in np.logspace(-2, 2, n_tau):
            angs = np.linspace(0.0, math.pi, n_ang)
            for i, theta in enumerate(angs):
                for eta in angs[i:]:
                    lhs, rhs = lnss4_check(kappa, tau, theta, eta)
                    n_configs += 1
                    if lhs == 0.0 and rhs == 0.0:
                        continue
                    log_ratio = (
                        kappa * (math.log(tau + math.pi - eta) - math.log(tau + math.pi - theta))
                        - (eta**2 - theta**2) / tau
                    )
                    worst = max(worst, log_ratio)
    return {"max_ratio": float(math.exp(worst)), "n_configs": n_configs}


# ---------------------------------------------------------------------------
# Kernel-to-bound scans


def default_tau_grid(tau_min=0.05, tau_max=4.0, steps=16):
    """Logarithmic tau grid in [tau_min, tau_max]."""
    return list(np.logspace(math.log10(tau_min), math.log10(tau_max), steps))


def _pairs_arrays(pairs):
    xs = np.array([p.x for p, _, _ in pairs])
    ts = np.array([p.t for p, _, _ in pairs])
    ys = np.array([q.x for _, q, _ in pairs])
    ss = np.array([q.t for _, q, _ in pairs])
    strata = [s for _, _, s in pairs]
    return xs, ts, ys, ss, strata


def _scan_one_tau(domain, params, tau, xs, ts, ys, ss, tol):
    bound_fn = bound_cone_raw if domain == "cone" else bound_surface_raw
    bounds = bound_fn(tau, params, xs, ts, ys, ss)
    n = len(bounds)
    values = np.empty(n)
    floors = np.empty(n)
    # bucket by bound magnitude so the absolute series tolerance tracks the target size
    decades = np.floor(np.log10(bounds) / 3.0).astype(int)
    for dec in np.unique(decades):
        idx = np.where(decades == dec)[0]
        tol_abs = tol * float(bounds[idx].min())
        vals, tail, roundoff, _ = heat_batch(
            params, tau, xs[idx], ts[idx], ys[idx], ss[idx], representation="integral",
            tol=tol_abs,
        )
        values[idx] = vals
        floors[idx] = roundoff + tail
    ok = values > _FLOOR_FACTOR * floors
    ratios = np.where(ok & (bounds > 0), values / bounds, np.nan)
    return values, bounds, ratios, ok


def scan(
    domain,
    params,
    tau_grid,
    samples_per_stratum=60,
    seed=0,
    strata=None,
    tol=1e-8,
    threads=1,
    csv_path=None,
):
    """Evaluate kernel and bound over stratified pairs and a tau grid; report the ratio window."""
    tau_grid = list(tau_grid)
    if not tau_grid:
        raise ValueError("tau grid must be nonempty")
    for tau in tau_grid:
        _check_tau_bound(tau)
    start = time.perf_counter()
    pairs = sample_pairs(domain, params, samples_per_stratum, seed, strata=strata)
    xs, ts, ys, ss, strata_names = _pairs_arrays(pairs)

    def work(tau):
        return _scan_one_tau(domain, params, tau, xs, ts, ys, ss, tol)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(work, tau_grid))
    else:
        results = [work(tau) for tau in tau_grid]

    min_ratio, max_ratio = math.inf, -math.inf
    argmin, argmax = {}, {}
    n_evals = 0
    n_skipped = 0
    rows = []
    for tau, (values, bounds, ratios, ok) in zip(tau_grid, results):
        n_evals += len(ratios)
        n_skipped += int((~ok).sum())
        for i, ratio in enumerate(ratios):
            if csv_path is not None:
                rows.append((tau, i, strata_names[i], values[i], bounds[i], ratio, bool(ok[i])))
            if not ok[i]:
                continue
            info = {
                "tau": float(tau),
                "stratum": strata_names[i],
                "p": {"x": list(map(float, xs[i])), "t": float(ts[i])},
                "q": {"x": list(map(float, ys[i])), "t": float(ss[i])},
                "ratio": float(ratio),
            }
            if ratio < min_ratio:
                min_ratio, argmin = float(ratio), info
            if ratio > max_ratio:
                max_ratio, argmax = float(ratio), info
    if not math.isfinite(min_ratio):
        raise RuntimeError("all scan evaluations fell below the numerical floor")
    if csv_path is not None:
        import csv as _csv

        with open(csv_path, "w", newline="") as fh:
            writer = _csv.writer(fh)
            writer.writerow(["tau", "pair_index", "stratum", "kernel", "bound", "ratio", "certified"])
            for row in rows:
                writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    params_dict = {"d": params.d, "gamma": params.gamma}
    if isinstance(params, ConeParams):
        params_dict["mu"] = params.mu
    return RatioReport(
        domain=domain,
        params=params_dict,
        tau_grid=[float(t) for t in tau_grid],
        n_pairs=len(pairs),
        n_evals=n_evals,
        n_skipped=n_skipped,
        min_ratio=min_ratio,
        max_ratio=max_ratio,
        argmin=argmin,
        argmax=argmax,
        seed=seed,
        wall_time=time.perf_counter() - start,
    )

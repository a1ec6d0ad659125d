"""Reproducing kernels and heat kernels on the solid cone and the conic surface.

Each heat kernel has two representations: the spectral series over reproducing
kernels, and the folded integral of the one-dimensional heat kernel against the
product of normalized measures. Both are evaluated by tensor Gauss rules whose
orders are large enough to integrate the truncated series exactly, so the error
budget reduces to the series tail bound plus roundoff.
"""

from __future__ import annotations

import math

import numpy as np

from .geometry import ConeParams, SurfaceParams, _pair_invariants
from .orthopoly import (
    BudgetError,
    KernelValue,
    MAX_TERMS,
    clamp_to_unit,
    heat_1d_sum,
    log_jacobi_at_one,
    log_z_at_one,
    plan_budget,
    series_tail_bound,
)
from .quadrature import pi_rule

__all__ = [
    "MIN_TAU",
    "lambda_cone",
    "lambda_surface",
    "reproducing_cone",
    "reproducing_surface",
    "heat_cone_series",
    "heat_cone_integral",
    "heat_surface_series",
    "heat_surface_integral",
    "heat_batch",
    "odd_term_residual",
]

# below this tau the default truncation/quadrature orders grow beyond desk scale
MIN_TAU = 0.05

_ROUNDOFF = 1e-14
_CHUNK_ELEMS = 1 << 24
_MAX_GRID = 1 << 24


def lambda_cone(params: ConeParams):
    """Jacobi index of the folded one-dimensional kernel on the solid cone."""
    return 2.0 * params.alpha + params.gamma + 0.5


def lambda_surface(params: SurfaceParams):
    """Jacobi index of the folded one-dimensional kernel on the surface."""
    return params.gamma + params.d - 1.5


def _eigen_shift(params):
    """Linear part c of the spectral exponent tau*n*(n+c)."""
    if isinstance(params, ConeParams):
        return 2.0 * params.mu + params.gamma + params.d
    return params.gamma + params.d - 1.0


def _inner_rules(params, orders):
    if isinstance(params, ConeParams):
        m_u, m_v1, m_v2 = orders
        return (
            pi_rule(params.mu - 0.5, m_u),
            pi_rule(params.alpha - 0.5, m_v1),
            pi_rule(params.gamma, m_v2),
        )
    m_v1, m_v2 = orders
    return (
        pi_rule((params.d - 3) / 2.0, m_v1),
        pi_rule(params.gamma, m_v2),
    )


def _xi_grid(params, xs, ts, ys, ss, rules):
    """Flattened xi values (P, G) and tensor weights (G,) for a batch of pairs."""
    inner, lat, edge = _pair_invariants(xs, ts, ys, ss)
    if isinstance(params, ConeParams):
        ru, rv1, rv2 = rules
        g = np.sqrt(np.maximum(0.5 * (inner[:, None] + lat[:, None] * ru.nodes[None, :]), 0.0))
        xi = (
            g[:, :, None, None] * rv1.nodes[None, None, :, None]
            + edge[:, None, None, None] * rv2.nodes[None, None, None, :]
        )
        weights = (
            ru.weights[:, None, None] * rv1.weights[None, :, None] * rv2.weights[None, None, :]
        )
    else:
        rv1, rv2 = rules
        g = np.sqrt(np.maximum(0.5 * inner, 0.0))
        xi = (
            g[:, None, None] * rv1.nodes[None, :, None]
            + edge[:, None, None] * rv2.nodes[None, None, :]
        )
        weights = rv1.weights[:, None] * rv2.weights[None, :]
    n_pairs = xi.shape[0]
    xi = clamp_to_unit(xi)
    return xi.reshape(n_pairs, -1), weights.reshape(-1)


def _poly_series(xi, weights, coeffs, lam):
    """Per-pair sums over k of coeffs[k] * int P_k^{lam,lam}(xi) dW, by upward recurrence.

    Returns (values, abs_sums); abs_sums tracks accumulated magnitude for the
    roundoff estimate. Kahan compensation on the per-pair accumulators.
    """
    n_max = len(coeffs) - 1
    total = np.full(xi.shape[0], coeffs[0])
    comp = np.zeros_like(total)
    abs_sum = np.abs(total).copy()
    p_prev = np.ones_like(xi)
    p = (lam + 1.0) * xi
    for k in range(1, n_max + 1):
        if coeffs[k] != 0.0:
            term = coeffs[k] * (p @ weights)
            y = term - comp
            t = total + y
            comp = (t - total) - y
            total = t
            abs_sum += np.abs(term)
        if k < n_max:
            p, p_prev = (
                (
                    (2 * (k + 1) + 2 * lam - 1) * (k + 1 + lam) * xi * p
                    - (k + lam) * (k + 1 + lam) * p_prev
                )
                / ((k + 1) * (k + 1 + 2 * lam)),
                p,
            )
    return total, abs_sum


def _z_scale(ks, lam):
    """Z_k(1)/P_k(1): converts P_k(xi) into Z_k(xi)."""
    ks = np.asarray(ks, dtype=float)
    return np.exp(log_z_at_one(ks, lam) - log_jacobi_at_one(ks, lam))


def _as_batch(p, q):
    return p.x[None, :], np.array([p.t]), q.x[None, :], np.array([q.t])


def _check_domain(params, p, q):
    if p.d != params.d or q.d != params.d:
        raise ValueError("point dimension does not match params.d")


def default_orders(params, truncation_n):
    """Conservative default tensor orders: max(60, 2 * truncation_n) per axis."""
    m = max(60, 2 * truncation_n)
    return (m, m, m) if isinstance(params, ConeParams) else (m, m)


def exactness_orders(params, degree):
    """Smallest per-axis orders that integrate Z_degree(xi) exactly."""
    m_v = degree // 2 + 2
    m_u = degree // 4 + 2
    return (m_u, m_v, m_v) if isinstance(params, ConeParams) else (m_v, m_v)


def _reproducing_batch(n, params, xs, ts, ys, ss, orders=None):
    degree = 2 * n
    if orders is None:
        orders = exactness_orders(params, max(degree, 1))
    rules = _inner_rules(params, orders)
    xi, weights = _xi_grid(params, xs, ts, ys, ss, rules)
    lam = lambda_cone(params) if isinstance(params, ConeParams) else lambda_surface(params)
    coeffs = np.zeros(degree + 1)
    coeffs[degree] = _z_scale(degree, lam) if degree > 0 else 1.0
    values, abs_sum = _poly_series(xi, weights, coeffs, lam)
    return values, _ROUNDOFF * abs_sum, orders


def reproducing_cone(n, params: ConeParams, p, q, orders=None):
    """Reproducing kernel P_n on the solid cone by triple tensor quadrature."""
    if n < 0:
        raise ValueError("degree must be >= 0")
    _check_domain(params, p, q)
    values, roundoff, orders = _reproducing_batch(n, params, *_as_batch(p, q), orders=orders)
    return KernelValue(
        value=float(values[0]),
        error_budget=float(roundoff[0]),
        meta={"degree": n, "orders": tuple(orders), "representation": "quadrature"},
    )


def reproducing_surface(n, params: SurfaceParams, p, q, orders=None):
    """Reproducing kernel P_n on the conic surface by double tensor quadrature."""
    if n < 0:
        raise ValueError("degree must be >= 0")
    _check_domain(params, p, q)
    values, roundoff, orders = _reproducing_batch(n, params, *_as_batch(p, q), orders=orders)
    return KernelValue(
        value=float(values[0]),
        error_budget=float(roundoff[0]),
        meta={"degree": n, "orders": tuple(orders), "representation": "quadrature"},
    )


def heat_batch(
    params,
    tau,
    xs,
    ts,
    ys,
    ss,
    representation="integral",
    tol=1e-10,
    orders=None,
    max_terms=MAX_TERMS,
):
    """Evaluate the heat kernel on a batch of point pairs.

    Returns (values, tail_bound, roundoff_array, meta). Pairs are chunked to
    bound peak memory; results are independent of the chunking.
    """
    if not tau > 0.0:
        raise ValueError("tau must be > 0")
    if representation not in ("integral", "series"):
        raise ValueError(f"unknown representation {representation!r}")
    lam = lambda_cone(params) if isinstance(params, ConeParams) else lambda_surface(params)
    budget = plan_budget(tau / 4.0, lam, tol=tol, max_terms=max_terms)
    n_int = budget.truncation_n
    n_series = (n_int + 1) // 2
    tail = series_tail_bound(tau / 4.0, lam, 2 * n_series)
    if orders is None:
        orders = exactness_orders(params, 2 * n_series)
    rules = _inner_rules(params, orders)

    xs = np.asarray(xs, dtype=float)
    ts = np.asarray(ts, dtype=float)
    ys = np.asarray(ys, dtype=float)
    ss = np.asarray(ss, dtype=float)
    n_pairs = xs.shape[0]
    grid_size = int(np.prod([len(r.nodes) for r in rules]))
    if grid_size > _MAX_GRID:
        raise BudgetError(
            f"tensor quadrature grid of {grid_size} points exceeds the supported size; "
            "relax tol or raise tau"
        )
    chunk = max(1, _CHUNK_ELEMS // max(grid_size, 1))

    values = np.empty(n_pairs)
    roundoff = np.empty(n_pairs)
    if representation == "series":
        c_lin = _eigen_shift(params)
        ks = np.arange(0, 2 * n_series + 1)
        coeffs = np.zeros(2 * n_series + 1)
        even = ks[ks % 2 == 0]
        ns = even // 2
        coeffs[even] = np.exp(-tau * ns * (ns + c_lin)) * _z_scale(even, lam)
    for lo in range(0, n_pairs, chunk):
        hi = min(lo + chunk, n_pairs)
        xi, weights = _xi_grid(params, xs[lo:hi], ts[lo:hi], ys[lo:hi], ss[lo:hi], rules)
        if representation == "integral":
            g_vals, g_abs = heat_1d_sum(tau / 4.0, lam, xi.reshape(-1), n_int, return_abs=True)
            values[lo:hi] = g_vals.reshape(xi.shape) @ weights
            roundoff[lo:hi] = 5e-16 * (g_abs.reshape(xi.shape) @ weights)
        else:
            vals, abs_sum = _poly_series(xi, weights, coeffs, lam)
            values[lo:hi] = vals
            roundoff[lo:hi] = _ROUNDOFF * abs_sum
    meta = {
        "representation": representation,
        "truncation_n": n_series if representation == "series" else n_int,
        "orders": tuple(orders),
        "lambda": lam,
        "tau": tau,
    }
    return values, float(tail if representation == "series" else budget.tail_bound), roundoff, meta


def _heat_single(params, tau, p, q, representation, tol, orders, max_terms):
    _check_domain(params, p, q)
    if orders is None:
        lam = lambda_cone(params) if isinstance(params, ConeParams) else lambda_surface(params)
        budget = plan_budget(tau / 4.0, lam, tol=tol, max_terms=max_terms)
        orders = default_orders(params, (budget.truncation_n + 1) // 2)
    values, tail, roundoff, meta = heat_batch(
        params, tau, *_as_batch(p, q), representation=representation, tol=tol, orders=orders,
        max_terms=max_terms,
    )
    return KernelValue(
        value=float(values[0]),
        error_budget=tail + float(roundoff[0]),
        meta=meta,
    )


def heat_cone_series(tau, params: ConeParams, p, q, tol=1e-10, orders=None, max_terms=MAX_TERMS):
    """Heat kernel on the solid cone: spectral series over reproducing kernels."""
    return _heat_single(params, tau, p, q, "series", tol, orders, max_terms)


def heat_cone_integral(tau, params: ConeParams, p, q, tol=1e-10, orders=None, max_terms=MAX_TERMS):
    """Heat kernel on the solid cone: folded integral of the one-dimensional kernel."""
    return _heat_single(params, tau, p, q, "integral", tol, orders, max_terms)


def heat_surface_series(
    tau, params: SurfaceParams, p, q, tol=1e-10, orders=None, max_terms=MAX_TERMS
):
    """Heat kernel on the conic surface: spectral series over reproducing kernels."""
    return _heat_single(params, tau, p, q, "series", tol, orders, max_terms)


def heat_surface_integral(
    tau, params: SurfaceParams, p, q, tol=1e-10, orders=None, max_terms=MAX_TERMS
):
    """Heat kernel on the conic surface: folded integral of the one-dimensional kernel."""
    return _heat_single(params, tau, p, q, "integral", tol, orders, max_terms)


def odd_term_residual(n, params, p, q, orders=None):
    """Quadrature of the odd-degree term Z_n(xi); vanishes by the parity argument."""
    if n < 1 or n % 2 == 0:
        raise ValueError("n must be a positive odd degree")
    _check_domain(params, p, q)
    if orders is None:
        orders = exactness_orders(params, n + 1)
    rules = _inner_rules(params, orders)
    xi, weights = _xi_grid(params, *_as_batch(p, q), rules)
    lam = lambda_cone(params) if isinstance(params, ConeParams) else lambda_surface(params)
    coeffs = np.zeros(n + 1)
    coeffs[n] = _z_scale(n, lam)
    coeffs[0] = 0.0
    values, _ = _poly_series(xi, weights, coeffs, lam)
    return float(values[0])

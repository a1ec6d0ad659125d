"""Symmetric Jacobi polynomials and the one-dimensional Jacobi heat kernel at the right endpoint."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

__all__ = [
    "BudgetError",
    "SeriesBudget",
    "KernelValue",
    "CLAMP_TOL",
    "MAX_TERMS",
    "clamp_to_unit",
    "eval_jacobi",
    "jacobi_at_one",
    "log_jacobi_at_one",
    "jacobi_norm_sq",
    "eval_z",
    "z_at_one",
    "log_z_at_one",
    "series_tail_bound",
    "plan_budget",
    "heat_1d_sum",
    "heat_1d",
]

# |w| may exceed 1 by this much due to rounding in the xi maps; larger is an error
CLAMP_TOL = 1e-12
MAX_TERMS = 100_000


class BudgetError(RuntimeError):
    """The requested series tolerance cannot be met within the term cap."""


@dataclass(frozen=True)
class SeriesBudget:
    """Truncation index together with a rigorous bound on the dropped tail."""

    truncation_n: int
    tail_bound: float

    def __post_init__(self):
        if self.truncation_n < 1:
            raise ValueError("truncation_n must be positive")
        if not self.tail_bound >= 0.0:
            raise ValueError("tail_bound must be >= 0")


@dataclass(frozen=True)
class KernelValue:
    """A kernel evaluation carrying its truncation/quadrature error budget."""

    value: float
    error_budget: float
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not math.isfinite(self.error_budget):
            raise ValueError("error_budget must be finite")


def _check_lambda(lam):
    if not lam >= 0.0:
        raise ValueError(f"lambda must be >= 0, got {lam}")


def clamp_to_unit(w, tol=CLAMP_TOL, hard_tol=1e-9):
    """Clamp values marginally outside [-1, 1] back in; fail loudly beyond hard_tol."""
    w = np.asarray(w, dtype=float)
    over = np.abs(w) - 1.0
    if np.any(over > hard_tol):
        raise ValueError(f"argument outside [-1, 1] by {float(np.max(over)):.3e}")
    if np.any(over > tol):
        raise ValueError(
            f"argument outside [-1, 1] by {float(np.max(over)):.3e} "
            f"(beyond clamp tolerance {tol:.1e})"
        )
    return np.clip(w, -1.0, 1.0)


def eval_jacobi(n, lam, w):
    """Evaluate P_n^{lam,lam}(w) by the three-term recurrence; w may be an array."""
    if n < 0:
        raise ValueError("degree must be >= 0")
    _check_lambda(lam)
    w = clamp_to_unit(w)
    scalar = w.ndim == 0
    w = np.atleast_1d(w)
    p_prev = np.ones_like(w)
    if n == 0:
        return float(p_prev[0]) if scalar else p_prev
    p = (lam + 1.0) * w
    for k in range(2, n + 1):
        p, p_prev = (
            ((2 * k + 2 * lam - 1) * (k + lam) * w * p - (k + lam - 1) * (k + lam) * p_prev)
            / (k * (k + 2 * lam)),
            p,
        )
    return float(p[0]) if scalar else p


def log_jacobi_at_one(n, lam):
    """log P_n^{lam,lam}(1) = log binom(n + lam, n)."""
    return gammaln(n + lam + 1.0) - gammaln(lam + 1.0) - gammaln(n + 1.0)


def jacobi_at_one(n, lam):
    """P_n^{lam,lam}(1)."""
    return np.exp(log_jacobi_at_one(np.asarray(n, dtype=float), lam))


def _log_norm_sq(n, lam):
    n = np.asarray(n, dtype=float)
    return (
        gammaln(2 * lam + 2.0)
        + 2.0 * gammaln(n + lam + 1.0)
        - np.log(2 * n + 2 * lam + 1.0)
        - 2.0 * gammaln(lam + 1.0)
        - gammaln(n + 1.0)
        - gammaln(n + 2 * lam + 1.0)
    )


def jacobi_norm_sq(n, lam):
    """Squared norm of P_n^{lam,lam} in the probability measure with density prop. to (1-w^2)^lam."""
    if n < 0:
        raise ValueError("degree must be >= 0")
    _check_lambda(lam)
    return float(np.exp(_log_norm_sq(n, lam)))


def log_z_at_one(n, lam):
    """log Z_n(1) = log[(2n + 2*lam + 1) Gamma(n + 2*lam + 1) / (Gamma(2*lam + 2) n!)]."""
    n = np.asarray(n, dtype=float)
    return (
        np.log(2 * n + 2 * lam + 1.0)
        + gammaln(n + 2 * lam + 1.0)
        - gammaln(2 * lam + 2.0)
        - gammaln(n + 1.0)
    )


def z_at_one(n, lam):
    """Z_n(1) = P_n(1)^2 / h_n."""
    return float(np.exp(log_z_at_one(n, lam)))


def eval_z(n, lam, w):
    """Z_n(w) = P_n^{lam,lam}(1) P_n^{lam,lam}(w) / h_n^{lam,lam}."""
    scale = math.exp(float(log_z_at_one(n, lam)) - float(log_jacobi_at_one(n, lam)))
    return scale * eval_jacobi(n, lam, w)


def series_tail_bound(tau_quarter, lam, n_trunc):
    """Upper bound for sum_{n > n_trunc} exp(-tau_quarter * n(n+2*lam+1)) * Z_n(1).

    Uses |Z_n(w)| <= Z_n(1) and geometric domination of the term ratio, which is
    decreasing in n for lam >= 0.
    """
    n1 = n_trunc + 1
    log_t = -tau_quarter * n1 * (n1 + 2 * lam + 1.0) + float(log_z_at_one(n1, lam))
    z_ratio = (
        (2 * n1 + 2 * lam + 3.0) / (2 * n1 + 2 * lam + 1.0) * (n1 + 2 * lam + 1.0) / (n1 + 1.0)
    )
    r = z_ratio * math.exp(-tau_quarter * (2 * n1 + 2 * lam + 2.0))
    if r >= 1.0:
        return math.inf
    if log_t < -700.0:
        return 0.0
    return math.exp(log_t) / (1.0 - r)


def plan_budget(tau_quarter, lam, tol=1e-12, max_terms=MAX_TERMS):
    """Choose a truncation index whose rigorous tail bound is below tol.

    Seeded by N = ceil(sqrt(max(1, log(zbar/tol)) / tau_quarter)) + 10 with zbar the
    Z_n(1) value at a first-pass guess, then grown until the tail bound fits.
    """
    if not tau_quarter > 0.0:
        raise ValueError("tau_quarter must be > 0")
    _check_lambda(lam)
    if not tol > 0.0:
        raise ValueError("tol must be > 0")
    guess = int(math.ceil(math.sqrt(max(1.0, math.log(1.0 / tol)) / tau_quarter))) + 10
    zbar = max(1.0, float(log_z_at_one(min(guess, max_terms), lam)))
    n = int(math.ceil(math.sqrt(max(1.0, zbar + math.log(1.0 / tol)) / tau_quarter))) + 10
    n = min(n, max_terms)
    while True:
        tail = series_tail_bound(tau_quarter, lam, n)
        if tail <= tol:
            break
        if n >= max_terms:
            raise BudgetError(
                f"tail bound {tail:.3e} > tol {tol:.3e} at the term cap {max_terms}"
            )
        n = min(max_terms, int(math.ceil(n * 1.25)) + 5)
    # the seed formula over-pads; trim to the smallest feasible index
    while n > 1:
        lower = series_tail_bound(tau_quarter, lam, n - 1)
        if lower > tol:
            break
        n, tail = n - 1, lower
    return SeriesBudget(truncation_n=n, tail_bound=tail)


def heat_1d_sum(tau_quarter, lam, w, n_trunc, return_abs=False):
    """Truncated series sum_{n <= n_trunc} exp(-tau_quarter*n(n+2*lam+1)) Z_n(w), vectorized.

    Kahan-compensated accumulation; terms span many orders of magnitude. With
    return_abs=True also returns the accumulated |term| sums, which set the
    cancellation roundoff floor of the result.
    """
    w = np.atleast_1d(np.asarray(w, dtype=float))
    ns = np.arange(n_trunc + 1, dtype=float)
    # coefficient of P_n(w): exp(-tau_quarter*lambda_n) * Z_n(1) / P_n(1)
    log_c = -tau_quarter * ns * (ns + 2 * lam + 1.0) + log_z_at_one(ns, lam) - log_jacobi_at_one(
        ns, lam
    )
    coeff = np.exp(log_c)

    total = np.full_like(w, coeff[0])
    comp = np.zeros_like(w)
    abs_total = np.abs(total).copy() if return_abs else None
    p_prev = np.ones_like(w)
    p = (lam + 1.0) * w
    for k in range(1, n_trunc + 1):
        term = coeff[k] * p
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if return_abs:
            abs_total += np.abs(term)
        p, p_prev = (
            (
                (2 * (k + 1) + 2 * lam - 1) * (k + 1 + lam) * w * p
                - (k + lam) * (k + 1 + lam) * p_prev
            )
            / ((k + 1) * (k + 1 + 2 * lam)),
            p,
        )
    if return_abs:
        return total, abs_total
    return total


def heat_1d(tau_quarter, lam, w, tol=1e-12, max_terms=MAX_TERMS):
    """G_{tau_quarter}(1, w): heat kernel of the symmetric Jacobi expansion at the endpoint."""
    budget = plan_budget(tau_quarter, lam, tol=tol, max_terms=max_terms)
    w = clamp_to_unit(w)
    vals = heat_1d_sum(tau_quarter, lam, w, budget.truncation_n)
    value = float(vals[0]) if np.ndim(w) == 0 else vals
    return KernelValue(
        value=value,
        error_budget=budget.tail_bound,
        meta={"truncation_n": budget.truncation_n, "lambda": lam, "tau_quarter": tau_quarter},
    )

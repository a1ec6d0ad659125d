"""Quadrature rules for the normalized measures on [-1,1] and on the cone domains."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import betaln, gammaln

from .geometry import ConeParams, SurfaceParams

__all__ = [
    "QuadRule",
    "ConeQuadRule",
    "gauss_jacobi",
    "gauss_jacobi_01",
    "pi_rule",
    "cone_rule",
    "surface_rule",
    "sphere_rule",
]


@dataclass(frozen=True)
class QuadRule:
    """Nodes/weights for a normalized measure on [-1, 1] (weights sum to 1)."""

    nu: float
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def is_dirac(self):
        return self.nu == -0.5

    def integrate(self, f):
        return float(np.dot(self.weights, f(self.nodes)))


def _jacobi_recurrence(m, a, b):
    """Recurrence coefficients (diagonal, off-diagonal) for the (1-x)^a (1+x)^b weight."""
    k = np.arange(m, dtype=float)
    s = a + b
    diag = np.zeros(m)
    with np.errstate(invalid="ignore", divide="ignore"):
        num = b * b - a * a
        den = (2 * k + s) * (2 * k + s + 2.0)
        diag = np.where(den != 0.0, num / np.where(den != 0.0, den, 1.0), 0.0)
    if s == 0.0 or s == -1.0:
        diag[0] = (b - a) / (s + 2.0)
    off = np.zeros(max(m - 1, 0))
    if m > 1:
        off[0] = math.sqrt(4.0 * (a + 1.0) * (b + 1.0) / ((s + 2.0) ** 2 * (s + 3.0)))
        if m > 2:
            k = np.arange(2, m, dtype=float)
            off[1:] = np.sqrt(
                4.0 * k * (k + a) * (k + b) * (k + s) / ((2 * k + s) ** 2 * ((2 * k + s) ** 2 - 1.0))
            )
    return diag, off


def gauss_jacobi(m, a, b):
    """m-point Gauss rule on [-1,1] for the probability measure prop. to (1-x)^a (1+x)^b."""
    if m < 1:
        raise ValueError("order must be >= 1")
    if a <= -1.0 or b <= -1.0:
        raise ValueError("Jacobi exponents must be > -1")
    diag, off = _jacobi_recurrence(m, a, b)
    nodes, vecs = eigh_tridiagonal(diag, off)
    weights = vecs[0] ** 2
    weights = weights / weights.sum()
    if a == b:
        # enforce exact node/weight symmetry so odd integrands cancel pairwise
        nodes = 0.5 * (nodes - nodes[::-1])
        weights = 0.5 * (weights + weights[::-1])
    return nodes, weights


def gauss_jacobi_01(m, a, b):
    """m-point Gauss rule on [0,1] for the probability measure prop. to (1-t)^a t^b."""
    nodes, weights = gauss_jacobi(m, a, b)
    return 0.5 * (nodes + 1.0), weights


def pi_rule(nu, m):
    """Rule for the normalized measure with density prop. to (1-w^2)^(nu-1/2); Dirac at nu=-1/2."""
    if nu < -0.5:
        raise ValueError(f"nu must be >= -1/2, got {nu}")
    if m < 1:
        raise ValueError("order must be >= 1")
    if nu == -0.5:
        return QuadRule(nu=nu, nodes=np.array([-1.0, 1.0]), weights=np.array([0.5, 0.5]))
    nodes, weights = gauss_jacobi(m, nu - 0.5, nu - 0.5)
    return QuadRule(nu=nu, nodes=nodes, weights=weights)


def log_pi_const(nu):
    """log c_nu with 1/c_nu = int_{-1}^{1} (1-w^2)^(nu-1/2) dw = B(1/2, nu+1/2)."""
    return -betaln(0.5, nu + 0.5)


def sphere_rule(d, order):
    """Nodes/weights for the normalized uniform measure on the unit sphere S^{d-1}.

    d=2: equispaced angles (exact for trig degree < order); d=3: Gauss-Legendre in the
    polar cosine times equispaced azimuths.
    """
    if d == 2:
        ang = 2.0 * math.pi * np.arange(order) / order
        pts = np.column_stack([np.cos(ang), np.sin(ang)])
        w = np.full(order, 1.0 / order)
        return pts, w
    if d == 3:
        n_pol = max(2, order // 2)
        c, wc = gauss_jacobi(n_pol, 0.0, 0.0)
        ang = 2.0 * math.pi * np.arange(order) / order
        s = np.sqrt(1.0 - c**2)
        x = np.outer(s, np.cos(ang)).ravel()
        y = np.outer(s, np.sin(ang)).ravel()
        z = np.repeat(c, order)
        pts = np.column_stack([x, y, z])
        w = np.repeat(wc / order, order)
        return pts, w
    raise ValueError(f"unsupported dimension d={d} (supported: 2, 3)")


def _log_sphere_area(d):
    return math.log(2.0) + (d / 2.0) * math.log(math.pi) - gammaln(d / 2.0)


@dataclass(frozen=True)
class ConeQuadRule:
    """Composite rule over the solid cone or the conic surface, normalized to total mass 1."""

    params: object
    t_nodes: np.ndarray
    t_weights: np.ndarray
    radial_nodes: np.ndarray  # empty for the surface
    radial_weights: np.ndarray
    angular_nodes: np.ndarray
    angular_weights: np.ndarray
    normalization: float  # analytic normalizing constant of the raw weight

    def points(self):
        """Flattened (xs, ts, ws) arrays; ws sum to 1."""
        d = self.params.d
        n_ang = len(self.angular_weights)
        if self.radial_nodes.size:
            shape = (len(self.t_nodes), len(self.radial_nodes), n_ang)
            t = self.t_nodes[:, None, None]
            r = self.radial_nodes[None, :, None]
            ts = np.broadcast_to(t, shape)
            xs = (t * r)[..., None] * self.angular_nodes[None, None, :, :]
            ws = (
                self.t_weights[:, None, None]
                * self.radial_weights[None, :, None]
                * self.angular_weights[None, None, :]
            )
        else:
            shape = (len(self.t_nodes), n_ang)
            t = self.t_nodes[:, None]
            ts = np.broadcast_to(t, shape)
            xs = t[..., None] * self.angular_nodes[None, :, :]
            ws = self.t_weights[:, None] * self.angular_weights[None, :]
        return xs.reshape(-1, d), ts.reshape(-1).copy(), ws.reshape(-1)

    def integrate(self, f):
        """Integrate f(xs, ts) (vectorized over flattened points) against the rule."""
        xs, ts, ws = self.points()
        return float(np.dot(ws, f(xs, ts)))


def cone_rule(params: ConeParams, orders=(60, 60, 64)):
    """Rule integrating over the solid cone against its normalized weight.

    Substitution x = t*r*omega turns the weight into the product
    t^(d+2*mu-1)(1-t)^gamma * r^(d-1)(1-r^2)^(mu-1/2) * uniform(sphere).
    """
    d, mu, gamma = params.d, params.mu, params.gamma
    m_t, m_r, m_ang = orders
    t_nodes, t_weights = gauss_jacobi_01(m_t, gamma, d + 2 * mu - 1.0)
    # r^2 = z maps the radial weight to a Jacobi weight in z
    z_nodes, r_weights = gauss_jacobi_01(m_r, mu - 0.5, d / 2.0 - 1.0)
    r_nodes = np.sqrt(z_nodes)
    ang_nodes, ang_weights = sphere_rule(d, m_ang)
    log_mass = (
        _log_sphere_area(d)
        + betaln(d + 2 * mu, gamma + 1.0)
        + betaln(d / 2.0, mu + 0.5)
        - math.log(2.0)
    )
    return ConeQuadRule(
        params=params,
        t_nodes=t_nodes,
        t_weights=t_weights,
        radial_nodes=r_nodes,
        radial_weights=r_weights,
        angular_nodes=ang_nodes,
        angular_weights=ang_weights,
        normalization=math.exp(-log_mass),
    )


def surface_rule(params: SurfaceParams, orders=(60, 64)):
    """Rule integrating over the conic surface against its normalized weight.

    With x = t*omega the weighted surface measure reduces to
    t^(d-2)(1-t)^gamma * uniform(sphere); the constant metric factor of the slanted
    surface cancels in the normalization.
    """
    d, gamma = params.d, params.gamma
    m_t, m_ang = orders
    t_nodes, t_weights = gauss_jacobi_01(m_t, gamma, d - 2.0)
    ang_nodes, ang_weights = sphere_rule(d, m_ang)
    log_mass = _log_sphere_area(d) + betaln(d - 1.0, gamma + 1.0)
    return ConeQuadRule(
        params=params,
        t_nodes=t_nodes,
        t_weights=t_weights,
        radial_nodes=np.empty(0),
        radial_weights=np.empty(0),
        angular_nodes=ang_nodes,
        angular_weights=ang_weights,
        normalization=math.exp(-log_mass),
    )

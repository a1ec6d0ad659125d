"""Points on the solid cone and its surface, argument maps, distances, pair sampling."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ConeParams",
    "SurfaceParams",
    "ConePoint",
    "SurfacePoint",
    "xi_cone",
    "xi_surface",
    "dist_cone",
    "dist_surface",
    "cs_gap",
    "sample_pairs",
    "pairs_to_csv",
    "STRATA_CONE",
    "STRATA_SURFACE",
]

_POINT_TOL = 1e-12
_ARG_HARD_TOL = 1e-9


@dataclass(frozen=True)
class ConeParams:
    """Parameter set (d, mu, gamma) for the solid cone; alpha = mu + (d-1)/2 is derived."""

    d: int
    mu: float
    gamma: float

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("d must be >= 2")
        if not self.mu >= 0.0:
            raise ValueError("mu must be >= 0")
        if not self.gamma >= -0.5:
            raise ValueError("gamma must be >= -1/2")

    @property
    def alpha(self):
        return self.mu + (self.d - 1) / 2.0


@dataclass(frozen=True)
class SurfaceParams:
    """Parameter set (d, gamma) for the conic surface."""

    d: int
    gamma: float

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("d must be >= 2")
        if not self.gamma >= -0.5:
            raise ValueError("gamma must be >= -1/2")


def _as_vec(x):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("point coordinate x must be a 1-d vector")
    return x


@dataclass(frozen=True)
class ConePoint:
    """A point (x, t) of the solid cone: ||x|| <= t <= 1."""

    x: np.ndarray
    t: float

    def __post_init__(self):
        object.__setattr__(self, "x", _as_vec(self.x))
        if not 0.0 <= self.t <= 1.0 + _POINT_TOL:
            raise ValueError(f"t must be in [0, 1], got {self.t}")
        r = float(np.linalg.norm(self.x))
        if r > self.t + _POINT_TOL:
            raise ValueError(f"||x|| = {r} exceeds t = {self.t}")

    @property
    def d(self):
        return self.x.size


@dataclass(frozen=True)
class SurfacePoint:
    """A point (x, t) of the conic surface: ||x|| = t, t in [0, 1]."""

    x: np.ndarray
    t: float

    def __post_init__(self):
        object.__setattr__(self, "x", _as_vec(self.x))
        if not 0.0 <= self.t <= 1.0 + _POINT_TOL:
            raise ValueError(f"t must be in [0, 1], got {self.t}")
        r = float(np.linalg.norm(self.x))
        if abs(r - self.t) > _POINT_TOL:
            raise ValueError(f"||x|| = {r} differs from t = {self.t} beyond tolerance")

    @property
    def d(self):
        return self.x.size


def _clamp_arg(a, hard_tol=_ARG_HARD_TOL):
    a = np.asarray(a, dtype=float)
    if np.any(np.abs(a) > 1.0 + hard_tol):
        raise ValueError(
            f"argument leaves [-1, 1] by {float(np.max(np.abs(a)) - 1.0):.3e}; invalid points?"
        )
    return np.clip(a, -1.0, 1.0)


def _pair_invariants(x, t, y, s):
    """Return (st + <x,y>, lateral product, sqrt(1-t)sqrt(1-s)) for array inputs."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    inner = s * t + np.sum(x * y, axis=-1)
    lat = np.sqrt(np.maximum(t**2 - np.sum(x * x, axis=-1), 0.0)) * np.sqrt(
        np.maximum(s**2 - np.sum(y * y, axis=-1), 0.0)
    )
    edge = np.sqrt(np.maximum(1.0 - t, 0.0)) * np.sqrt(np.maximum(1.0 - s, 0.0))
    return inner, lat, edge


def xi_cone_raw(x, t, y, s, u, v1, v2):
    """Array form of the solid-cone argument map; broadcasts over all inputs."""
    inner, lat, edge = _pair_invariants(x, t, y, s)
    g = np.sqrt(np.maximum(0.5 * (inner + lat * u), 0.0))
    return _clamp_arg(v1 * g + v2 * edge)


def xi_surface_raw(x, t, y, s, v1, v2):
    """Array form of the surface argument map."""
    inner, _, edge = _pair_invariants(x, t, y, s)
    g = np.sqrt(np.maximum(0.5 * inner, 0.0))
    return _clamp_arg(v1 * g + v2 * edge)


def xi_cone(p: ConePoint, q: ConePoint, u, v1, v2):
    """xi(x,t,y,s; u,v1,v2) = v1*sqrt((st+<x,y>+sqrt(t^2-|x|^2)sqrt(s^2-|y|^2)u)/2) + v2*sqrt(1-t)sqrt(1-s)."""
    for name, val in (("u", u), ("v1", v1), ("v2", v2)):
        if abs(val) > 1.0:
            raise ValueError(f"{name} must lie in [-1, 1]")
    return float(xi_cone_raw(p.x, p.t, q.x, q.t, u, v1, v2))


def xi_surface(p: SurfacePoint, q: SurfacePoint, v1, v2):
    """xi(x,t,y,s; v1,v2) = v1*sqrt((st+<x,y>)/2) + v2*sqrt(1-t)sqrt(1-s)."""
    for name, val in (("v1", v1), ("v2", v2)):
        if abs(val) > 1.0:
            raise ValueError(f"{name} must lie in [-1, 1]")
    return float(xi_surface_raw(p.x, p.t, q.x, q.t, v1, v2))


def dist_cone_raw(x, t, y, s):
    inner, lat, edge = _pair_invariants(x, t, y, s)
    arg = np.sqrt(np.maximum(0.5 * (inner + lat), 0.0)) + edge
    return np.arccos(_clamp_arg(arg))


def dist_surface_raw(x, t, y, s):
    inner, _, edge = _pair_invariants(x, t, y, s)
    arg = np.sqrt(np.maximum(0.5 * inner, 0.0)) + edge
    return np.arccos(_clamp_arg(arg))


def dist_cone(p: ConePoint, q: ConePoint):
    """Distance on the solid cone; values lie in [0, pi/2]."""
    return float(dist_cone_raw(p.x, p.t, q.x, q.t))


def dist_surface(p: SurfacePoint, q: SurfacePoint):
    """Distance on the conic surface; values lie in [0, pi/2]."""
    return float(dist_surface_raw(p.x, p.t, q.x, q.t))


def cs_gap(p: ConePoint, q: ConePoint):
    """Return (st + <x,y>, sqrt(t^2-|x|^2)sqrt(s^2-|y|^2)); the first dominates the second."""
    inner, lat, _ = _pair_invariants(p.x, p.t, q.x, q.t)
    return float(inner), float(lat)


STRATA_CONE = (
    "interior",
    "near_apex",
    "near_base",
    "near_lateral",
    "antipodal",
    "coincident",
)
STRATA_SURFACE = ("interior", "near_apex", "near_base", "antipodal", "coincident")


def _random_direction(rng, d):
    v = rng.standard_normal(d)
    n = np.linalg.norm(v)
    while n < 1e-12:
        v = rng.standard_normal(d)
        n = np.linalg.norm(v)
    return v / n


def _sample_point(rng, d, domain, stratum, delta):
    if stratum == "near_apex":
        t = float(rng.uniform(0.0, delta))
    elif stratum == "near_base":
        t = float(rng.uniform(1.0 - delta, 1.0))
    else:
        t = float(rng.uniform(0.02, 0.98))
    omega = _random_direction(rng, d)
    if domain == "surface":
        return SurfacePoint(x=t * omega, t=t)
    if stratum == "near_lateral":
        r = t * (1.0 - delta * rng.uniform(0.0, 1.0))
    else:
        r = t * rng.uniform(0.0, 1.0) ** (1.0 / d)
    return ConePoint(x=r * omega, t=t)


def _perturb(rng, p, domain, eps):
    d = p.d
    t = min(max(p.t + eps * rng.uniform(-1.0, 1.0), 0.0), 1.0)
    if domain == "surface":
        omega = p.x / p.t if p.t > 0 else _random_direction(rng, d)
        omega = omega + eps * rng.standard_normal(d)
        omega = omega / np.linalg.norm(omega)
        return SurfacePoint(x=t * omega, t=t)
    x = p.x + eps * rng.standard_normal(d)
    r = np.linalg.norm(x)
    if r > t:
        x = x * (t / r) * (1.0 - 1e-9)
    return ConePoint(x=x, t=t)


def _antipodal_partner(rng, p, domain, delta):
    d = p.d
    omega = p.x / np.linalg.norm(p.x) if np.linalg.norm(p.x) > 0 else _random_direction(rng, d)
    partner = -omega + delta * rng.standard_normal(d)
    partner = partner / np.linalg.norm(partner)
    s = float(rng.uniform(0.02, 0.98))
    if domain == "surface":
        return SurfacePoint(x=s * partner, t=s)
    r = s * rng.uniform(0.5, 1.0)
    return ConePoint(x=r * partner, t=s)


def sample_pairs(domain, params, count, seed, strata=None, delta=1e-3, eps=1e-4):
    """Deterministic stratified point pairs: list of (p, q, stratum_name).

    count is the number of pairs per stratum.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if domain not in ("cone", "surface"):
        raise ValueError(f"unknown domain {domain!r}")
    if strata is None:
        strata = STRATA_CONE if domain == "cone" else STRATA_SURFACE
    default = STRATA_CONE if domain == "cone" else STRATA_SURFACE
    for name in strata:
        if name not in default:
            raise ValueError(f"unknown stratum {name!r} for domain {domain!r}")
    rng = np.random.default_rng(seed)
    d = params.d
    out = []
    for stratum in strata:
        for _ in range(count):
            p = _sample_point(rng, d, domain, stratum, delta)
            if stratum == "coincident":
                q = _perturb(rng, p, domain, eps)
            elif stratum == "antipodal":
                q = _antipodal_partner(rng, p, domain, delta)
            else:
                q = _sample_point(rng, d, domain, stratum, delta)
            out.append((p, q, stratum))
    return out


def pairs_to_csv(pairs, path):
    """Write sampled pairs as CSV with columns x..., t, y..., s, stratum."""
    if not pairs:
        raise ValueError("no pairs to write")
    d = pairs[0][0].d
    header = [f"x{i}" for i in range(d)] + ["t"] + [f"y{i}" for i in range(d)] + ["s", "stratum"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for p, q, stratum in pairs:
            writer.writerow(
                [repr(float(v)) for v in p.x]
                + [repr(float(p.t))]
                + [repr(float(v)) for v in q.x]
                + [repr(float(q.t)), stratum]
            )

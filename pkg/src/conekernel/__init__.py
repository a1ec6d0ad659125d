"""Jacobi heat kernels on the solid cone and its surface, with two-sided bound checks."""

from .bounds import (
    RatioReport,
    bound_cone,
    bound_surface,
    default_tau_grid,
    lnss1_pair,
    lnss2_pair,
    lnss3_pair,
    lnss4_check,
    scan,
)
from .geometry import (
    ConeParams,
    ConePoint,
    SurfaceParams,
    SurfacePoint,
    cs_gap,
    dist_cone,
    dist_surface,
    sample_pairs,
    xi_cone,
    xi_surface,
)
from .kernels import (
    heat_cone_integral,
    heat_cone_series,
    heat_surface_integral,
    heat_surface_series,
    odd_term_residual,
    reproducing_cone,
    reproducing_surface,
)
from .orthopoly import (
    BudgetError,
    KernelValue,
    SeriesBudget,
    eval_jacobi,
    eval_z,
    heat_1d,
    jacobi_norm_sq,
)
from .quadrature import ConeQuadRule, QuadRule, cone_rule, pi_rule, surface_rule

__version__ = "0.1.0"

__all__ = [
    "BudgetError",
    "ConeParams",
    "ConePoint",
    "ConeQuadRule",
    "KernelValue",
    "QuadRule",
    "RatioReport",
    "SeriesBudget",
    "SurfaceParams",
    "SurfacePoint",
    "bound_cone",
    "bound_surface",
    "cone_rule",
    "cs_gap",
    "default_tau_grid",
    "dist_cone",
    "dist_surface",
    "eval_jacobi",
    "eval_z",
    "heat_1d",
    "heat_cone_integral",
    "heat_cone_series",
    "heat_surface_integral",
    "heat_surface_series",
    "jacobi_norm_sq",
    "lnss1_pair",
    "lnss2_pair",
    "lnss3_pair",
    "lnss4_check",
    "odd_term_residual",
    "pi_rule",
    "reproducing_cone",
    "reproducing_surface",
    "sample_pairs",
    "scan",
    "surface_rule",
    "xi_cone",
    "xi_surface",
]

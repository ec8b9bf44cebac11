"""Numerical verification of single-point higher-order Szegő sum rules on the unit circle."""

from .differences import (
    WeightSymbol,
    difference,
    lp_norm,
    lp_sum,
    toeplitz_quadratic_form,
    weight_symbol_coeffs,
    weighted_energy,
)
from .errors import *  # noqa: F401,F403
from .families import FamilySpec, generate, sweep
from .opuc import (
    MomentSeq,
    SzegoPolyPair,
    VerblunskySeq,
    WeightGrid,
    bernstein_szego_weight,
    default_grid_size,
    moments_from_verblunsky,
    moments_from_weight,
    szego_eval,
    verblunsky_from_moments,
)
from .residual import (
    QuotientStencil,
    ResidualPolynomial,
    divide_by_difference,
    moment_conditions,
    phi_power_substitute,
    telescoping_partial_sums,
)
from .sumrule import (
    NecessityVerdict,
    SumRuleReport,
    coefficient_side,
    log_remainder,
    necessity_probe,
    relative_bound_probe,
    spectral_side,
    spectral_side_exact,
    sumrule_report,
)

__version__ = "0.1.0"

"""Search, verification and reproduction drivers."""

from .domain import (
    C_POWERS,
    CORNER_TOL,
    CValue,
    DomainField,
    DomainMinimum,
    EnergyDiff,
    GridSpec,
    MinLJEnergy,
    ThetaDiff,
    c_from_d,
    c_function,
    discriminant,
    discriminant_from_d,
    epsilon_zero,
    h_eps,
    is_corner,
    refine_minimum,
    scan_domain,
    verify_all_scales_optimality,
    zeta_differences,
)
from .onewell import (
    ConditionResult,
    OneWellReport,
    onewell_verify_appendix,
    square_branches,
    theil_conditions_check,
    triangular_branches,
    u_p_bound,
    wide_well_example,
)
from .scale import ScaleMinimum, minimize_scale
from .windows import crossover_scale, nonminimality_window

__all__ = [
    "C_POWERS", "CORNER_TOL", "CValue", "ConditionResult", "DomainField", "DomainMinimum",
    "EnergyDiff", "GridSpec", "MinLJEnergy", "OneWellReport", "ScaleMinimum", "ThetaDiff",
    "c_from_d", "c_function", "crossover_scale", "discriminant", "discriminant_from_d",
    "epsilon_zero", "h_eps", "is_corner", "minimize_scale", "nonminimality_window",
    "onewell_verify_appendix", "refine_minimum", "scan_domain", "square_branches",
    "theil_conditions_check", "triangular_branches", "u_p_bound", "verify_all_scales_optimality",
    "wide_well_example", "zeta_differences",
]

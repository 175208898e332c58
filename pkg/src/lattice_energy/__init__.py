"""Pair energies of Bravais lattices for radial potentials."""

from . import errors, scan
from .energy import EnergyResult, energy_direct, energy_shell_partial, energy_theta_integral
from .lattice import (
    DomainPoint2D,
    Lattice,
    ShellCache,
    ShellSeries,
    count_points,
    dual,
    from_domain_point,
    kissing_number,
    make_lattice,
    shells,
    shortest_length,
    special_lattice,
)
from .ljopt import (
    H_function,
    LJParams,
    h_function,
    min_energy_closed_form,
    min_energy_ratio,
    optimal_scale,
    tilde_energy,
)
from .potentials import (
    Callback,
    HardCoreOneWell,
    InversePowerPoly,
    LennardJones,
    PiecewiseOneWell,
    RadialPotential,
    YukawaDiff,
    f_epsilon,
    from_config,
    v_counterexample,
)
from .specfun import (
    EvalResult,
    digamma,
    digamma_inverse,
    epstein_zeta,
    epstein_zeta_deriv,
    lattice_theta,
    riemann_zeta,
)

__all__ = [
    "Callback", "DomainPoint2D", "EnergyResult", "EvalResult", "H_function", "HardCoreOneWell",
    "InversePowerPoly", "LJParams", "Lattice", "LennardJones", "PiecewiseOneWell",
    "RadialPotential", "ShellCache", "ShellSeries", "YukawaDiff", "count_points", "digamma",
    "digamma_inverse", "dual", "energy_direct", "energy_shell_partial", "energy_theta_integral",
    "epstein_zeta", "epstein_zeta_deriv", "errors", "f_epsilon", "from_config", "from_domain_point",
    "h_function", "kissing_number", "lattice_theta", "make_lattice", "min_energy_closed_form",
    "min_energy_ratio", "optimal_scale", "riemann_zeta", "scan", "shells", "shortest_length",
    "special_lattice", "tilde_energy", "v_counterexample",
]

__version__ = "0.1.0"

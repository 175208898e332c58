"""Exception hierarchy.

Every error carries a short machine-readable ``code`` that the CLI maps to a
distinct exit status.
"""


class LatticeEnergyError(Exception):
    code = "error"
    exit_status = 1

    def __init__(self, message, **context):
        super().__init__(message)
        self.message = message
        self.context = context


class SingularBasis(LatticeEnergyError):
    code = "singular_basis"
    exit_status = 10


class UnknownLattice(LatticeEnergyError):
    code = "unknown_lattice"
    exit_status = 11


class OutOfDomain(LatticeEnergyError):
    code = "out_of_domain"
    exit_status = 12


class EnumerationTooLarge(LatticeEnergyError):
    code = "enumeration_too_large"
    exit_status = 13


class DomainError(LatticeEnergyError, ValueError):
    code = "domain_error"
    exit_status = 20


class NoConvergence(LatticeEnergyError):
    code = "no_convergence"
    exit_status = 21


class DivergentExponent(LatticeEnergyError, ValueError):
    code = "divergent_exponent"
    exit_status = 22


class NoDensity(LatticeEnergyError):
    code = "no_density"
    exit_status = 30


class NonSummableTail(LatticeEnergyError):
    code = "non_summable_tail"
    exit_status = 31


class QuadratureFailure(LatticeEnergyError):
    code = "quadrature_failure"
    exit_status = 32


class IntegralDivergence(LatticeEnergyError):
    code = "integral_divergence"
    exit_status = 33


class NoMinimumInRange(LatticeEnergyError):
    code = "no_minimum_in_range"
    exit_status = 40


class IndeterminateAtTriangular(LatticeEnergyError):
    code = "indeterminate_at_triangular"
    exit_status = 41


class NoCrossoverFound(LatticeEnergyError):
    code = "no_crossover_found"
    exit_status = 42


class ConfigParse(LatticeEnergyError):
    code = "config_parse"
    exit_status = 2


class UnknownFigure(LatticeEnergyError):
    code = "unknown_figure"
    exit_status = 3

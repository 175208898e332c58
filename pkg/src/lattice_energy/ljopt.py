"""Lennard-Jones reductions: f(r) = a2 r^(-x2/2) - a1 r^(-x1/2).

For every lattice, E_f[lam L] = a2 lam^-x2 zeta_L(x2) - a1 lam^-x1 zeta_L(x1),
so scale optimization is explicit. Products of zeta powers are handled in
log space because zeta_L(x)^x1 overflows for moderate exponents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DivergentExponent, DomainError
from .lattice import Lattice
from .potentials import LennardJones
from .specfun import DEFAULT_TOL, epstein_zeta, epstein_zeta_deriv, log_epstein_zeta


@dataclass(frozen=True)
class LJParams:
    a1: float
    a2: float
    x1: float
    x2: float

    def __post_init__(self):
        if not (self.a1 > 0 and self.a2 > 0):
            raise DomainError("LJ coefficients must be positive", a1=self.a1, a2=self.a2)
        if not self.x2 > self.x1:
            raise DomainError("LJ exponents need x2 > x1", x1=self.x1, x2=self.x2)

    def potential(self) -> LennardJones:
        return LennardJones(self.a1, self.a2, self.x1, self.x2)

    @classmethod
    def with_minimum_at(cls, r0: float, x1: float, x2: float, a1: float = 1.0) -> "LJParams":
        """Parameters whose potential has its minimum at squared distance r0."""
        return cls(a1, a1 * (x1 / x2) * r0 ** ((x2 - x1) / 2), x1, x2)


def _check(L: Lattice, x1: float):
    if not x1 > L.dim:
        raise DivergentExponent(f"need x1 > d = {L.dim}", x1=x1, d=L.dim)


def lj_energy(L: Lattice, p: LJParams, tol: float = DEFAULT_TOL) -> float:
    _check(L, p.x1)
    return p.a2 * epstein_zeta(L, p.x2, tol).value - p.a1 * epstein_zeta(L, p.x1, tol).value


def log_tilde_energy(L: Lattice, x1: float, x2: float, tol: float = DEFAULT_TOL) -> float:
    _check(L, x1)
    if not x2 > x1:
        raise DomainError("need x2 > x1", x1=x1, x2=x2)
    return x1 * log_epstein_zeta(L, x2, tol) - x2 * log_epstein_zeta(L, x1, tol)


def tilde_energy(L: Lattice, x1: float, x2: float, tol: float = DEFAULT_TOL) -> float:
    """zeta_L(x2)^x1 / zeta_L(x1)^x2 for a unit-density L."""
    return math.exp(log_tilde_energy(L, x1, x2, tol))


def log_optimal_scale(L: Lattice, p: LJParams, tol: float = DEFAULT_TOL) -> float:
    _check(L, p.x1)
    num = math.log(p.a2 * p.x2) + log_epstein_zeta(L, p.x2, tol)
    den = math.log(p.a1 * p.x1) + log_epstein_zeta(L, p.x1, tol)
    return (num - den) / (p.x2 - p.x1)


def optimal_scale(L: Lattice, p: LJParams, tol: float = DEFAULT_TOL) -> float:
    """The scale lam_0 minimizing lam -> E_f[lam L]."""
    return math.exp(log_optimal_scale(L, p, tol))


def log_neg_min_energy(L: Lattice, p: LJParams, tol: float = DEFAULT_TOL) -> float:
    """log(-min_lam E_f[lam L])."""
    # at the optimum, E = -a1 zeta(x1) (1 - x1/x2) lam_0^-x1
    lz1 = log_epstein_zeta(L, p.x1, tol)
    return math.log(p.a1) + lz1 + math.log1p(-p.x1 / p.x2) - p.x1 * log_optimal_scale(L, p, tol)


def min_energy_closed_form(L: Lattice, p: LJParams, tol: float = DEFAULT_TOL) -> float:
    return -math.exp(log_neg_min_energy(L, p, tol))


def r_min(p: LJParams) -> float:
    """Squared distance at which the potential attains its minimum."""
    return math.exp(2.0 / (p.x2 - p.x1) * math.log(p.a2 * p.x2 / (p.a1 * p.x1)))


def H_function(L: Lattice, Lam: Lattice, x: float, tol: float = DEFAULT_TOL) -> float:
    """(1/x) log(zeta_L(x) / zeta_Lam(x))."""
    _check(L, x)
    return (log_epstein_zeta(L, x, tol) - log_epstein_zeta(Lam, x, tol)) / x


def h_function(L: Lattice, x: float, tol: float = DEFAULT_TOL) -> float:
    """-log zeta_L(x) + x zeta_L'(x) / zeta_L(x)."""
    _check(L, x)
    z = epstein_zeta(L, x, tol).value
    dz = epstein_zeta_deriv(L, x, tol).value
    return -math.log(z) + x * dz / z


def min_energy_ratio(Lam: Lattice, L: Lattice, x1: float, x2: float, tol: float = DEFAULT_TOL) -> float:
    """min_lam E_f[lam Lam] / min_lam E_f[lam L].

    The ratio does not depend on (a1, a2) nor on how either lattice is scaled,
    since the scale is optimized out.
    """
    p = LJParams(1.0, 1.0, x1, x2)
    return math.exp(log_neg_min_energy(Lam, p, tol) - log_neg_min_energy(L, p, tol))


def min_energy_ratio_grid(Lam: Lattice, L: Lattice, exponents, tol: float = DEFAULT_TOL) -> dict:
    """min_energy_ratio for every pair x1 < x2 of ``exponents``.

    With D(x) = log zeta_Lam(x) - log zeta_L(x), the log ratio is
    (x2 D(x1) - x1 D(x2)) / (x2 - x1), so each exponent needs one zeta pair.
    """
    xs = sorted(float(x) for x in exponents)
    for x in xs:
        _check(L, x)
        _check(Lam, x)
    D = {x: log_epstein_zeta(Lam, x, tol) - log_epstein_zeta(L, x, tol) for x in xs}
    out = {}
    for i, x1 in enumerate(xs):
        for x2 in xs[i + 1:]:
            out[(x1, x2)] = math.exp((x2 * D[x1] - x1 * D[x2]) / (x2 - x1))
    return out

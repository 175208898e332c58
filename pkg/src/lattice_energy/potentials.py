"""Radial potentials.

Every potential is a function of the SQUARED distance r = |p|^2, so that the
lattice energy is sum_p f(|p|^2). Potentials defined on the distance (the
one-well family ``g``) are wrapped through f(r) = g(sqrt(r)).

Each variant advertises a tail envelope: constants (x_t, K, r_tail) with
|f(r)| <= K r^(-x_t/2) for r >= r_tail. Variants whose far field is an exact
finite sum of inverse powers also expose that sum (``power_tail``) so the
energy engine can close the lattice sum with Epstein zeta values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import special

from .errors import ConfigParse, DomainError, NoDensity, NonSummableTail
from .specfun import annulus_gauss_bound, annulus_power_bound


@dataclass(frozen=True)
class TailEnvelope:
    exponent: float  # x_t, in distance units
    constant: float  # K
    r_tail: float = 1.0  # squared distance from which the envelope holds
    gauss_rate: float | None = None  # |f(r)| <= K exp(-rate r) when set


class RadialPotential:
    """Base class; subclasses implement ``__call__`` on squared distances."""

    kind = "potential"

    def __call__(self, r):
        raise NotImplementedError

    @property
    def envelope(self) -> TailEnvelope:
        raise NotImplementedError

    def power_tail(self):
        """(r_start, [(coeff, power), ...]) with f(r) = sum coeff r^-power for r > r_start."""
        return None

    def density(self, t):
        raise NoDensity(f"{self.kind} has no inverse Laplace density", kind=self.kind)

    @property
    def has_density(self) -> bool:
        return False

    def density_breakpoints(self) -> tuple[float, ...]:
        return ()

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Squared distances where f is not smooth."""
        return ()


@dataclass(frozen=True)
class LennardJones(RadialPotential):
    a1: float
    a2: float
    x1: float
    x2: float
    kind = "lj"

    def __post_init__(self):
        if not (self.a1 >= 0 and self.a2 > 0):
            raise DomainError("Lennard-Jones needs a1 >= 0 and a2 > 0", a1=self.a1, a2=self.a2)
        if not self.x2 > self.x1:
            raise DomainError("Lennard-Jones needs x2 > x1", x1=self.x1, x2=self.x2)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return self.a2 * r ** (-self.x2 / 2) - self.a1 * r ** (-self.x1 / 2)

    @property
    def envelope(self):
        return TailEnvelope(self.x1, self.a1 + self.a2, 1.0)

    def power_tail(self):
        return 0.0, [(self.a2, self.x2 / 2), (-self.a1, self.x1 / 2)]

    @property
    def has_density(self):
        return True

    def density(self, t):
        t = np.asarray(t, dtype=float)
        h1, h2 = self.x1 / 2, self.x2 / 2
        return self.a2 * t ** (h2 - 1) / special.gamma(h2) - self.a1 * t ** (h1 - 1) / special.gamma(h1)


@dataclass(frozen=True)
class InversePowerPoly(RadialPotential):
    """f(r) = sum coeff r^-power."""

    terms: tuple
    kind = "inverse_power"

    def __post_init__(self):
        terms = tuple((float(c), float(k)) for c, k in self.terms)
        if not terms:
            raise DomainError("InversePowerPoly needs at least one term")
        for _, k in terms:
            if k < 1:
                raise DomainError("inverse powers must be >= 1", power=k)
        object.__setattr__(self, "terms", terms)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        for c, k in self.terms:
            out = out + c * r ** (-k)
        return out

    @property
    def envelope(self):
        return TailEnvelope(2 * min(k for _, k in self.terms), sum(abs(c) for c, _ in self.terms), 1.0)

    def power_tail(self):
        return 0.0, list(self.terms)

    @property
    def has_density(self):
        return True

    def density(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for c, k in self.terms:
            out = out + c * t ** (k - 1) / special.gamma(k)
        return out


def f_epsilon(eps: float) -> InversePowerPoly:
    """Potential whose density is t(t - 1)(t - 1 - eps)."""
    return InversePowerPoly(((6.0, 4.0), (-2.0 * (2.0 + eps), 3.0), (1.0 + eps, 2.0)))


def v_counterexample() -> InversePowerPoly:
    """Positive, decreasing, convex potential 14/r^2 - 40/r^3 + 35/r^4."""
    return InversePowerPoly(((14.0, 2.0), (-40.0, 3.0), (35.0, 4.0)))


@dataclass(frozen=True)
class YukawaDiff(RadialPotential):
    """f(r) = (a2 exp(-x2 r) - a1 exp(-x1 r)) / r."""

    a1: float
    a2: float
    x1: float
    x2: float
    kind = "yukawa"

    def __post_init__(self):
        if not (self.a1 > 0 and self.a2 > 0 and self.x1 > 0 and self.x2 > 0):
            raise DomainError("Yukawa parameters must be positive")

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return (self.a2 * np.exp(-self.x2 * r) - self.a1 * np.exp(-self.x1 * r)) / r

    @property
    def envelope(self):
        rate = min(self.x1, self.x2)
        return TailEnvelope(math.inf, self.a1 + self.a2, 1.0, gauss_rate=rate)

    @property
    def has_density(self):
        return True

    def density(self, t):
        t = np.asarray(t, dtype=float)
        return self.a2 * (t > self.x2) - self.a1 * (t > self.x1)

    def density_breakpoints(self):
        return (self.x1, self.x2)


@dataclass(frozen=True)
class PiecewiseOneWell(RadialPotential):
    """Distance profile g: (2/3)(4/9)^p / rho^p below 4/9, 2 - 3 rho up to 1, -rho^-4 beyond."""

    p: float = 50.0
    kind = "onewell"
    rho_in = 4.0 / 9.0

    def _inner(self, rho):
        return (2.0 / 3.0) * (self.rho_in / rho) ** self.p

    def g(self, rho):
        rho = np.asarray(rho, dtype=float)
        with np.errstate(divide="ignore", over="ignore"):
            inner = self._inner(rho)
            outer = -(rho ** -4.0)
        mid = 2.0 - 3.0 * rho
        return np.where(rho < self.rho_in, inner, np.where(rho <= 1.0, mid, outer))

    def __call__(self, r):
        return self.g(np.sqrt(np.asarray(r, dtype=float)))

    @property
    def envelope(self):
        return TailEnvelope(4.0, 1.0, 1.0)

    def power_tail(self):
        return 1.0, [(-1.0, 2.0)]

    @property
    def breakpoints(self):
        return (self.rho_in**2, 1.0)


@dataclass(frozen=True)
class HardCoreOneWell(PiecewiseOneWell):
    """As PiecewiseOneWell but with the constant 30000 below 4/9."""

    core: float = 30000.0
    p: float = 0.0
    kind = "hardcore"

    def _inner(self, rho):
        return np.full_like(rho, self.core)


@dataclass(frozen=True)
class Callback(RadialPotential):
    """User function of the squared distance with an explicit tail envelope."""

    func: Callable = field(compare=False)
    tail_exponent: float = 0.0
    tail_constant: float = 0.0
    r_tail: float = 1.0
    name: str = "callback"
    kind = "callback"

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        try:
            out = np.asarray(self.func(r), dtype=float)
            if out.shape == r.shape:
                return out
        except Exception:
            pass
        return np.vectorize(lambda v: float(self.func(v)), otypes=[float])(r)

    @property
    def envelope(self):
        return TailEnvelope(self.tail_exponent, self.tail_constant, self.r_tail)


def evaluate(f: RadialPotential, r: float) -> float:
    """f at squared distance r (may be +inf)."""
    if not r > 0:
        raise DomainError("potentials are evaluated at r > 0", r=r)
    return float(f(r))


def inverse_laplace_density(f: RadialPotential, t: float) -> float:
    return float(f.density(t))


def lj_admissibility_check(x1: float, x2: float) -> bool:
    """pi^(-x2/2) Gamma(x2/2) x2/2 <= pi^(-x1/2) Gamma(x1/2) x1/2, in log form."""
    if not (x2 > x1 > 0):
        raise DomainError("need x2 > x1 > 0", x1=x1, x2=x2)

    def side(x):
        h = x / 2
        return -h * math.log(math.pi) + math.lgamma(h) + math.log(h)

    return side(x2) <= side(x1)


def yukawa_condition_check(a1: float, a2: float, x1: float, x2: float) -> bool:
    if not (0 < a1 < a2):
        raise DomainError("need 0 < a1 < a2", a1=a1, a2=a2)
    if not (0 < x1 < x2):
        raise DomainError("need 0 < x1 < x2", x1=x1, x2=x2)
    pi = math.pi
    log_lhs = (math.log(a1) + math.log(a1 * x2 + x1 * (a2 - a1) * pi)
               - math.log(a2 * x2) - math.log(a1 + (a2 - a1) * pi)
               + (1 - x1 / x2) * (a2 / a1 - 1) * pi)
    return log_lhs >= 0


def tail_bound(f: RadialPotential, R: float, lam: float, d: int, covol: float = 1.0,
               cell_radius: float | None = None) -> float:
    """Bound on sum over |p| > R of |f(lam^2 |p|^2)| for a lattice with the
    given covolume and cell radius (defaults: unit covolume, radius sqrt(d)/2)."""
    env = f.envelope
    if cell_radius is None:
        cell_radius = 0.5 * math.sqrt(d) * covol ** (1 / d)
    u0 = R - 2 * cell_radius
    if lam * lam * u0 * u0 < env.r_tail:
        u0 = math.sqrt(env.r_tail) / lam
    if env.gauss_rate is not None:
        return annulus_gauss_bound(env.constant, env.gauss_rate * lam * lam, u0, cell_radius, d, covol)
    if not env.exponent > d:
        raise NonSummableTail(f"tail exponent {env.exponent} <= dimension {d}",
                              exponent=env.exponent, d=d)
    return annulus_power_bound(env.constant * lam ** (-env.exponent), env.exponent, u0, cell_radius, d, covol)


def _num(v, key):
    try:
        return float(v)
    except (TypeError, ValueError):
        raise ConfigParse(f"parameter {key!r} must be a number", key=key, value=v) from None


def from_config(desc: dict) -> RadialPotential:
    """Build a potential from ``{"kind": ..., params}``.

    kinds: lj (a1, a2, x1, x2), inverse_power (terms: [[coeff, power], ...]),
    f_eps (eps), v_counterexample, yukawa (a1, a2, x1, x2), onewell (p),
    hardcore (core).
    """
    if not isinstance(desc, dict) or "kind" not in desc:
        raise ConfigParse("potential description needs a 'kind'", desc=str(desc))
    kind = desc["kind"]
    get = lambda k, default=None: _num(desc.get(k, default), k)  # noqa: E731
    try:
        if kind == "lj":
            return LennardJones(get("a1", 1.0), get("a2", 1.0), get("x1", 6.0), get("x2", 12.0))
        if kind == "inverse_power":
            terms = desc.get("terms")
            if not terms:
                raise ConfigParse("inverse_power needs 'terms'")
            return InversePowerPoly(tuple((_num(c, "coeff"), _num(k, "power")) for c, k in terms))
        if kind == "f_eps":
            return f_epsilon(get("eps", 0.0))
        if kind == "v_counterexample":
            return v_counterexample()
        if kind == "yukawa":
            return YukawaDiff(get("a1"), get("a2"), get("x1"), get("x2"))
        if kind == "onewell":
            return PiecewiseOneWell(get("p", 50.0))
        if kind == "hardcore":
            return HardCoreOneWell(core=get("core", 30000.0))
    except (TypeError, ValueError) as exc:
        raise ConfigParse(f"bad parameters for {kind!r}: {exc}", kind=kind) from None
    raise ConfigParse(f"unknown potential kind {kind!r}", kind=kind)

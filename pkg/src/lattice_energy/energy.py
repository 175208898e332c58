"""Lattice energies E_f[lam L] = sum_{p != 0} f(lam^2 |p|^2).

Two independent paths:

* ``energy_direct`` sums shells. When the potential's far field is an exact
  sum of inverse powers, the part of the lattice sum beyond the last
  breakpoint is closed with Epstein zeta values, so the only truncation error
  is that of the zeta evaluations. Otherwise the ball is grown by doubling
  until the annulus tail bound meets the tolerance.
* ``energy_theta_integral`` integrates (theta_L(u) - 1) against the inverse
  Laplace density of f.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import NoDensity, NonSummableTail, QuadratureFailure
from .lattice import Lattice, ShellCache, shortest_length
from .potentials import RadialPotential, tail_bound
from .specfun import DEFAULT_TOL, ThetaEvaluator, epstein_zeta_many

V_RANGE = 40.0


@dataclass(frozen=True)
class EnergyResult:
    value: float
    r_max_used: float
    tail_bound: float
    method: str


def _check_summable(f: RadialPotential, d: int):
    env = f.envelope
    if env.gauss_rate is None and not env.exponent > d:
        raise NonSummableTail(f"tail exponent {env.exponent} <= dimension {d}",
                              exponent=env.exponent, d=d)


def _start_radius(f: RadialPotential, L: Lattice, lam: float, m: float) -> float:
    R = 8.0 * m
    marks = list(f.breakpoints)
    pt = f.power_tail()
    if pt is not None:
        marks.append(pt[0])
    else:
        marks.append(f.envelope.r_tail)
    top = max(marks)
    if top > 0:
        R = max(R, math.sqrt(top) / lam * (1 + 1e-9) + 1e-12)
    return R


def energy_direct(f: RadialPotential, L: Lattice, lam: float, tol: float = DEFAULT_TOL,
                  cache: ShellCache | None = None) -> EnergyResult:
    """E_f[lam L] by shell summation with a certified remainder.

    ``tol`` is relative to max(|E|, 1). A ShellCache for L may be passed to
    reuse the enumeration across many scales.
    """
    if not lam > 0:
        raise ValueError("lambda must be positive")
    d = L.dim
    _check_summable(f, d)
    cache = cache if cache is not None and cache.lattice is L else ShellCache(L)
    m = shortest_length(L)
    R = _start_radius(f, L, lam, m)
    pt = f.power_tail()
    lam2 = lam * lam

    if pt is not None:
        r_start, terms = pt
        powers = sorted({2 * k for _, k in terms})
        zetas = dict(zip(powers, epstein_zeta_many(L, powers, tol * 1e-2)))
        sh = cache.get(R)
        x = lam2 * sh.r2
        near = x <= r_start * (1 + 1e-15)
        xs = x[near]
        corr = np.asarray(f(xs), dtype=float)
        for c, k in terms:
            corr = corr - c * xs ** (-k)
        value = float((sh.mult[near] * corr).sum())
        bound = 0.0
        for c, k in terms:
            z = zetas[2 * k]
            value += c * lam ** (-2 * k) * z.value
            bound += abs(c) * lam ** (-2 * k) * z.tail_bound
        return EnergyResult(value, R, bound, "direct")

    while True:
        sh = cache.get(R)
        value = float((sh.mult * f(lam2 * sh.r2)).sum())
        bound = tail_bound(f, R, lam, d, L.det_abs, L.cell_radius)
        if bound <= tol * max(abs(value), 1.0):
            return EnergyResult(value, R, bound, "direct")
        R *= 2.0


def energy_shell_partial(f: RadialPotential, L: Lattice, lam: float, from_shell: int,
                         tol: float = DEFAULT_TOL, cache: ShellCache | None = None) -> float:
    """Energy restricted to shells with index >= from_shell (first shell is 1)."""
    if from_shell < 1:
        raise ValueError("from_shell must be >= 1")
    full = energy_direct(f, L, lam, tol, cache).value
    if from_shell == 1:
        return full
    cache = cache if cache is not None and cache.lattice is L else ShellCache(L)
    R = shortest_length(L) * 1.5
    while True:
        sh = cache.get(R)
        if len(sh) >= from_shell - 1:
            break
        R *= 1.5
    head = sh.r2[: from_shell - 1], sh.mult[: from_shell - 1]
    return full - float((head[1] * f(lam * lam * head[0])).sum())


def energy_theta_integral(f: RadialPotential, L: Lattice, lam: float, tol: float = DEFAULT_TOL,
                          evaluator: ThetaEvaluator | None = None) -> EnergyResult:
    """E_f[lam L] = (pi/lam^2) int_0^inf (theta_L(u) - 1) rho_f(pi u / lam^2) du.

    Integrated in v = log u over [-40, 40] with adaptive quadrature.
    """
    if not f.has_density:
        raise NoDensity(f"{f.kind} has no inverse Laplace density", kind=f.kind)
    if not lam > 0:
        raise ValueError("lambda must be positive")
    _check_summable(f, L.dim)
    th = evaluator if evaluator is not None and evaluator.lattice is L else ThetaEvaluator(L, tol * 1e-2)
    c = math.pi / (lam * lam)

    def integrand(v):
        u = math.exp(v)
        return c * th.minus_one(u).value * float(f.density(c * u)) * u

    pts = sorted(math.log(t / c) for t in f.density_breakpoints()
                 if -V_RANGE < math.log(t / c) < V_RANGE)
    edges = [-V_RANGE] + pts + [V_RANGE]
    total = 0.0
    err = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for a, b in zip(edges[:-1], edges[1:]):
            # split at v = 0 where theta switches between its two evaluations
            inner = [0.0] if a < 0 < b else None
            val, e = integrate.quad(integrand, a, b, points=inner, epsabs=0.0,
                                    epsrel=tol, limit=1000)
            total += val
            err += e
    if not err <= max(1e3 * tol * abs(total), 1e-300):
        raise QuadratureFailure("theta integral did not reach the requested accuracy",
                                estimate=total, error=err)
    return EnergyResult(total, 0.0, err, "theta_integral")

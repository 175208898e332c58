"""One-dimensional minimization of lam -> E_f[lam L]."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from ..energy import energy_direct
from ..errors import NoMinimumInRange
from ..lattice import Lattice, ShellCache
from ..potentials import RadialPotential

GOLDEN = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class ScaleMinimum:
    lambda_star: float
    value: float
    bracket: tuple[float, float]
    grid_points_used: int


def _golden(F, a, b, xtol):
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = F(c), F(d)
    while b - a > xtol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = F(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = F(d)
    return (c, fc) if fc <= fd else (d, fd)


def _polish(F, x, fx, lo, hi):
    # Golden section stalls near sqrt(eps) relative accuracy at smooth minima;
    # when F is smooth there, solve F' = 0 with central differences instead.
    h = 1e-5 * x
    # second differences scale like h^2 at a smooth point but like h at a kink
    j1 = F(x + h) + F(x - h) - 2 * fx
    j2 = F(x + 2 * h) + F(x - 2 * h) - 2 * fx
    if not (j1 > 0 and j2 > 3.0 * j1):
        return x, fx

    def D(t):
        return (F(t + h) - F(t - h)) / (2 * h)

    w = 1e-4 * x
    a, b = max(lo, x - w), min(hi, x + w)
    try:
        da, db = D(a), D(b)
        if da < 0 < db:
            r = optimize.brentq(D, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps)
            fr = F(r)
            if fr <= fx + 1e-13 * max(1.0, abs(fx)):
                return r, fr
    except ValueError:
        pass
    return x, fx


def minimize_scale(f: RadialPotential, L: Lattice, lo: float, hi: float, tol: float = 1e-10,
                   n_grid: int = 200, energy_tol: float = 1e-12) -> ScaleMinimum:
    """Global minimum over [lo, hi] of lam -> E_f[lam L].

    A log-spaced grid locates local brackets, each refined by golden section
    (plus a derivative polish at smooth minima); the best bracket wins.
    """
    if not 0 < lo < hi:
        raise ValueError("need 0 < lo < hi")
    cache = ShellCache(L)

    def F(lam):
        return energy_direct(f, L, lam, energy_tol, cache).value

    grid = np.geomspace(lo, hi, n_grid)
    vals = np.array([F(x) for x in grid])
    i_best = int(np.argmin(vals))
    if i_best == n_grid - 1:
        raise NoMinimumInRange("energy still decreasing at the upper end of the scale window",
                               lo=lo, hi=hi)
    cands = [i for i in range(1, n_grid - 1) if vals[i] <= vals[i - 1] and vals[i] <= vals[i + 1]]
    if i_best == 0:
        cands.append(0)
    best = None
    for i in cands:
        a = grid[max(i - 1, 0)]
        b = grid[min(i + 1, n_grid - 1)]
        x, fx = _golden(F, a, b, tol)
        x, fx = _polish(F, x, fx, a, b)
        if best is None or fx < best[1]:
            best = (x, fx, (a, b))
    x, fx, br = best
    return ScaleMinimum(float(x), float(fx), (float(br[0]), float(br[1])), n_grid)

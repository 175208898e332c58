"""Scale windows where the triangular lattice is beaten, and crossover ladders."""

from __future__ import annotations

import math

import numpy as np

from ..energy import energy_direct
from ..errors import NoCrossoverFound
from ..lattice import Lattice, ShellCache, special_lattice
from ..potentials import RadialPotential
from .domain import GridSpec, zeta_diff_table

BEAT_RTOL = 1e-12


def _intervals(lams: np.ndarray, mask: np.ndarray) -> list[tuple[float, float]]:
    out = []
    i = 0
    n = len(mask)
    while i < n:
        if mask[i]:
            j = i
            while j + 1 < n and mask[j + 1]:
                j += 1
            out.append((float(lams[i]), float(lams[j])))
            i = j + 1
        else:
            i += 1
    return out


def _pure_power_terms(f: RadialPotential):
    pt = f.power_tail()
    if pt is not None and pt[0] == 0.0:
        return pt[1]
    return None


def nonminimality_window(f: RadialPotential, grid=None, lambda_range=(1.0, 3.0),
                         step: float = 1e-3, workers: int | None = None) -> list[tuple[float, float]]:
    """Scale intervals (closed, at grid resolution) on which some grid lattice
    has strictly lower energy than Lambda1 at equal density.

    ``grid`` is a GridSpec over the fundamental domain (default) or an
    explicit list of lattices, which are normalized to unit density.
    """
    lo, hi = lambda_range
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    lams = lo + step * np.arange(n)
    terms = _pure_power_terms(f)
    L1 = special_lattice("Lambda1")
    if grid is None:
        grid = GridSpec()

    if isinstance(grid, GridSpec) and terms is not None:
        powers = tuple(sorted({2.0 * k for _, k in terms}))
        _, diffs = zeta_diff_table(grid, powers, workers)
        D = np.array([d for d in diffs if d is not None])
        ref = np.zeros(n)
        from ..specfun import epstein_zeta_many
        zref = {s: r.value for s, r in zip(powers, epstein_zeta_many(L1, powers))}
        for c, k in terms:
            ref += c * lams ** (-2 * k) * zref[2 * k]
        beaten = np.zeros(n, dtype=bool)
        for a in range(0, n, 256):
            lam = lams[a:a + 256]
            diff = np.zeros((len(D), len(lam)))
            for c, k in terms:
                j = powers.index(2.0 * k)
                diff += c * np.outer(D[:, j], lam ** (-2 * k))
            thr = BEAT_RTOL * np.abs(ref[a:a + 256])
            beaten[a:a + 256] = (diff < -thr).any(axis=0)
        return _intervals(lams, beaten)

    if isinstance(grid, GridSpec):
        from ..lattice import from_domain_point
        from .domain import is_corner
        lattices = [from_domain_point((x, y)) for x, y, inside in grid.cells()
                    if inside and not is_corner((min(max(x, 0.0), 0.5), y))]
    else:
        lattices = [L.unit_density() for L in grid]
    ref_cache = ShellCache(L1)
    ref = np.array([energy_direct(f, L1, lam, cache=ref_cache).value for lam in lams])
    beaten = np.zeros(n, dtype=bool)
    for L in lattices:
        cache = ShellCache(L)
        for i, lam in enumerate(lams):
            if beaten[i]:
                continue
            e = energy_direct(f, L, lam, cache=cache).value
            if e < ref[i] - BEAT_RTOL * max(abs(e), abs(ref[i])):
                beaten[i] = True
    return _intervals(lams, beaten)


def crossover_scale(f: RadialPotential, L: Lattice, side: str = "high_density", start: float = 1.0,
                    stop: float = 2.0**16, ratio: float = 2.0) -> float:
    """Threshold on a geometric scale ladder beyond which L beats Lambda1.

    side="high_density" walks the ladder upward from ``start`` to ``stop`` and
    returns the smallest rung from which E_f[lam L] < E_f[lam Lambda1] at
    every later rung. side="low_density" walks downward from ``start`` to
    1/``stop`` and returns the largest such rung. L is compared at unit density.
    """
    if side not in ("high_density", "low_density"):
        raise ValueError("side must be 'high_density' or 'low_density'")
    L = L.unit_density()
    L1 = special_lattice("Lambda1")
    ladder = []
    lam = start
    if side == "high_density":
        while lam <= stop * (1 + 1e-12):
            ladder.append(lam)
            lam *= ratio
    else:
        while lam >= (1.0 / stop) * (1 - 1e-12):
            ladder.append(lam)
            lam /= ratio
    cL, c1 = ShellCache(L), ShellCache(L1)
    wins = []
    for lam in ladder:
        a = energy_direct(f, L, lam, cache=cL).value
        b = energy_direct(f, L1, lam, cache=c1).value
        wins.append(a < b - BEAT_RTOL * max(abs(a), abs(b)))
    if not wins[-1]:
        raise NoCrossoverFound("no crossover on the scale ladder", side=side, start=start,
                               stop=ladder[-1], rungs=len(ladder))
    k = len(wins) - 1
    while k > 0 and wins[k - 1]:
        k -= 1
    return float(ladder[k])

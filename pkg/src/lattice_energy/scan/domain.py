"""Scans over the 2D fundamental domain and the f_eps counterexample quantities.

With d_s(L) = zeta_L(s) - zeta_Lambda1(s) for unit-density L, the energy
difference for f_eps at scale lam is a quadratic in X = lam^-2 (times X^2)
whose discriminant is

    Delta(eps, L) = 4 (2 + eps)^2 d6^2 - 24 (1 + eps) d4 d8,

negative exactly when h(eps) = (2 + eps)^2 / (6 (1 + eps)) < c(L) = d4 d8 / d6^2.
"""

from __future__ import annotations

import functools
import io
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError, IndeterminateAtTriangular, LatticeEnergyError
from ..lattice import TRIANGULAR_CORNER, DomainPoint2D, from_domain_point, special_lattice
from ..ljopt import LJParams, min_energy_closed_form
from ..parallel import pmap
from ..potentials import RadialPotential
from ..specfun import DEFAULT_TOL, ThetaEvaluator, epstein_zeta_many
from ..energy import energy_direct

CORNER_TOL = 1e-9
C_POWERS = (4.0, 6.0, 8.0)


def _point(p) -> DomainPoint2D:
    return p if isinstance(p, DomainPoint2D) else DomainPoint2D(*p)


def is_corner(p) -> bool:
    p = _point(p)
    return math.hypot(p.x - TRIANGULAR_CORNER[0], p.y - TRIANGULAR_CORNER[1]) < CORNER_TOL


@functools.lru_cache(maxsize=None)
def reference_zetas(powers: tuple, tol: float = DEFAULT_TOL) -> np.ndarray:
    L1 = special_lattice("Lambda1")
    return np.array([r.value for r in epstein_zeta_many(L1, powers, tol)])


def zeta_differences(p, powers=C_POWERS, tol: float = DEFAULT_TOL) -> np.ndarray:
    """zeta_L(s) - zeta_Lambda1(s) at L = L(x, y) for each s in powers."""
    p = _point(p)
    powers = tuple(float(s) for s in powers)
    z = np.array([r.value for r in epstein_zeta_many(from_domain_point(p), powers, tol)])
    return z - reference_zetas(powers, tol)


def c_from_d(d) -> float:
    return float(d[0] * d[2] / d[1] ** 2)


def c_function(p) -> float:
    """c(L) = d4 d8 / d6^2; undefined (0/0) at the triangular corner."""
    p = _point(p)
    if is_corner(p):
        raise IndeterminateAtTriangular("c is 0/0 at the triangular lattice", x=p.x, y=p.y)
    return c_from_d(zeta_differences(p))


def h_eps(eps: float) -> float:
    return (2 + eps) ** 2 / (6 * (1 + eps))


def epsilon_zero(c_min: float) -> float:
    """Positive root of (2 + eps)^2 = 6 c_min (1 + eps)."""
    if not c_min > 2.0 / 3.0:
        raise DomainError("epsilon_zero needs c_min > 2/3", c_min=c_min)
    b = 6 * c_min - 4
    return (b + math.sqrt(b * b - 4 * (4 - 6 * c_min))) / 2


def discriminant_from_d(eps: float, d) -> float:
    return 4 * (2 + eps) ** 2 * d[1] ** 2 - 24 * (1 + eps) * d[0] * d[2]


def discriminant(eps: float, p) -> float:
    p = _point(p)
    if is_corner(p):
        raise IndeterminateAtTriangular("discriminant vanishes identically at the triangular lattice",
                                        x=p.x, y=p.y)
    return discriminant_from_d(eps, zeta_differences(p))


# ---------------------------------------------------------------- grids

@dataclass(frozen=True)
class GridSpec:
    """Rectangular grid on the domain plus samples of the arc x^2 + y^2 = 1."""

    x_lo: float = 0.0
    x_hi: float = 0.5
    y_lo: float = math.sqrt(3) / 2
    y_hi: float = 3.0
    step: float = 1e-2
    arc_step: float = 1e-3

    def axes(self):
        nx = int(math.floor((self.x_hi - self.x_lo) / self.step + 1e-9)) + 1
        ny = int(math.floor((self.y_hi - self.y_lo) / self.step + 1e-9)) + 1
        return self.x_lo + self.step * np.arange(nx), self.y_lo + self.step * np.arange(ny)

    def arc_angles(self):
        if self.arc_step <= 0:
            return np.zeros(0)
        t0, t1 = math.pi / 3, math.pi / 2
        n = int(math.floor((t1 - t0) / self.arc_step + 1e-9)) + 1
        return t0 + self.arc_step * np.arange(n)

    def cells(self):
        """(x, y, inside) in row-major order (y outer), then the arc samples."""
        xs, ys = self.axes()
        out = []
        for y in ys:
            for x in xs:
                out.append((float(x), float(y), x * x + y * y >= 1 - 1e-12))
        for t in self.arc_angles():
            out.append((math.cos(t), math.sin(t), True))
        return out


@dataclass
class DomainField:
    spec: GridSpec
    metric: str
    x: np.ndarray
    y: np.ndarray
    values: np.ndarray
    flags: list = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("x,y,value,flag\n")
        for x, y, v, fl in zip(self.x, self.y, self.values, self.flags):
            val = "nan" if not math.isfinite(v) else f"{v:.12g}"
            buf.write(f"{x:.12g},{y:.12g},{val},{fl}\n")
        return buf.getvalue()

    def argmin(self):
        ok = np.array([fl == "ok" for fl in self.flags])
        vals = np.where(ok, self.values, np.inf)
        i = int(np.argmin(vals))
        return float(self.x[i]), float(self.y[i]), float(self.values[i])


class Metric:
    name = "metric"

    def __call__(self, p: DomainPoint2D) -> float:
        raise NotImplementedError


@dataclass(frozen=True)
class CValue(Metric):
    name = "c_value"

    def __call__(self, p):
        return c_function(p)


@dataclass(frozen=True)
class ThetaDiff(Metric):
    alpha: float = 1.0
    name = "theta_diff"

    def __call__(self, p):
        a = ThetaEvaluator(from_domain_point(p))(self.alpha).value
        return a - _theta_ref(self.alpha)


@functools.lru_cache(maxsize=None)
def _theta_ref(alpha: float) -> float:
    return ThetaEvaluator(special_lattice("Lambda1"))(alpha).value


@dataclass(frozen=True)
class EnergyDiff(Metric):
    f: RadialPotential
    lam: float
    name = "energy_diff"

    def __call__(self, p):
        e = energy_direct(self.f, from_domain_point(p), self.lam).value
        return e - energy_direct(self.f, special_lattice("Lambda1"), self.lam).value


@dataclass(frozen=True)
class MinLJEnergy(Metric):
    params: LJParams
    name = "min_lj_energy"

    def __call__(self, p):
        return min_energy_closed_form(from_domain_point(p), self.params)


class _Cell:
    def __init__(self, metric):
        self.metric = metric

    def __call__(self, cell):
        x, y, inside = cell
        if not inside:
            return math.nan, "outside"
        try:
            p = DomainPoint2D(min(max(x, 0.0), 0.5), y)
            return float(self.metric(p)), "ok"
        except IndeterminateAtTriangular:
            return math.nan, "singular"
        except LatticeEnergyError:
            return math.nan, "error"


class _DiffCell:
    def __init__(self, powers):
        self.powers = powers

    def __call__(self, cell):
        x, y, inside = cell
        if not inside:
            return None
        p = DomainPoint2D(min(max(x, 0.0), 0.5), y)
        if is_corner(p):
            return None
        return zeta_differences(p, self.powers)


@functools.lru_cache(maxsize=8)
def zeta_diff_table(spec: GridSpec, powers: tuple = C_POWERS, workers: int | None = None):
    """Cells of the grid with their zeta differences (None for skipped cells)."""
    cells = spec.cells()
    diffs = pmap(_DiffCell(tuple(float(s) for s in powers)), cells, workers)
    return cells, diffs


def scan_domain(metric: Metric, spec: GridSpec = GridSpec(), workers: int | None = None) -> DomainField:
    """Evaluate metric on every grid cell and arc sample; failures are flagged, not raised."""
    cells = spec.cells()
    if isinstance(metric, CValue):
        _, diffs = zeta_diff_table(spec, C_POWERS, workers)
        res = []
        for (x, y, inside), d in zip(cells, diffs):
            if not inside:
                res.append((math.nan, "outside"))
            elif d is None:
                res.append((math.nan, "singular"))
            else:
                res.append((c_from_d(d), "ok"))
    else:
        res = pmap(_Cell(metric), cells, workers)
    return DomainField(spec, metric.name, np.array([c[0] for c in cells]), np.array([c[1] for c in cells]),
                       np.array([r[0] for r in res]), [r[1] for r in res])


@dataclass(frozen=True)
class DomainMinimum:
    x: float
    y: float
    value: float
    step: float


def _project(x, y):
    x = min(max(x, 0.0), 0.5)
    r = math.hypot(x, y)
    if r < 1:
        x, y = x / r, y / r
    return x, y


def refine_minimum(metric: Metric, field: DomainField, steps=(1e-3, 1e-4, 1e-5),
                   span: int = 15, workers: int | None = None) -> DomainMinimum:
    """Nested-grid refinement around the best cell of a scanned field.

    Candidate points falling inside the unit disk are projected radially onto
    the arc x^2 + y^2 = 1, which bounds the domain there.
    """
    x0, y0, v0 = field.argmin()
    best = (x0, y0, v0)
    for h in steps:
        pts = set()
        for i in range(-span, span + 1):
            for j in range(-span, span + 1):
                x, y = _project(best[0] + i * h, best[1] + j * h)
                pts.add((round(x, 14), round(y, 14)))
        pts = sorted(pts)
        vals = pmap(_Cell(metric), [(x, y, True) for x, y in pts], workers)
        for (x, y), (v, fl) in zip(pts, vals):
            if fl == "ok" and v < best[2]:
                best = (x, y, v)
    return DomainMinimum(best[0], best[1], best[2], steps[-1] if steps else field.spec.step)


def verify_all_scales_optimality(eps: float, spec: GridSpec = GridSpec(), workers: int | None = None):
    """(ok, witnesses): ok iff Delta(eps, L) < 0 on every grid cell.

    Delta < 0 means the f_eps energy difference with Lambda1 is positive at
    every scale. This is finite-grid evidence, not a proof. Witnesses are
    (x, y, Delta) for cells with Delta >= 0.
    """
    if eps < 0:
        raise DomainError("eps must be >= 0", eps=eps)
    cells, diffs = zeta_diff_table(spec, C_POWERS, workers)
    witnesses = []
    for (x, y, _), d in zip(cells, diffs):
        if d is None:
            continue
        delta = discriminant_from_d(eps, d)
        if delta >= 0:
            witnesses.append((x, y, float(delta)))
    return not witnesses, witnesses

"""Bravais lattices, duals, shell enumeration and the 2D fundamental domain."""

from __future__ import annotations

import functools
import io
import math
import threading
from dataclasses import dataclass, field

import numpy as np

from .errors import EnumerationTooLarge, OutOfDomain, SingularBasis, UnknownLattice

# Cap on enumerated lattice points per call.
DEFAULT_POINT_CAP = 10**8
# Points per enumeration chunk; bounds peak memory.
_CHUNK = 2_000_000
SHELL_RTOL = 1e-9


def _half_diagonal(b: np.ndarray) -> float:
    d = b.shape[0]
    if d > 16:
        return 0.5 * float(np.linalg.norm(b, axis=0).sum())
    signs = 1 - 2 * ((np.arange(2 ** (d - 1))[:, None] >> np.arange(d)) & 1)
    return 0.5 * float(np.linalg.norm(signs @ b.T, axis=1).max())


def lll_reduce(basis, delta: float = 0.75, max_iter: int = 10000) -> np.ndarray:
    """LLL-reduced basis (columns) of the same lattice."""
    b = np.array(basis, dtype=float).T.copy()  # rows are vectors here
    n = len(b)

    def gso(b):
        q = np.zeros_like(b)
        mu = np.zeros((n, n))
        for i in range(n):
            q[i] = b[i]
            for j in range(i):
                mu[i, j] = b[i] @ q[j] / (q[j] @ q[j])
                q[i] = q[i] - mu[i, j] * q[j]
        return q, mu

    q, mu = gso(b)
    k = 1
    it = 0
    while k < n and it < max_iter:
        it += 1
        for j in range(k - 1, -1, -1):
            c = round(mu[k, j])
            if c:
                b[k] = b[k] - c * b[j]
                q, mu = gso(b)
        if q[k] @ q[k] >= (delta - mu[k, k - 1] ** 2) * (q[k - 1] @ q[k - 1]):
            k += 1
        else:
            b[[k, k - 1]] = b[[k - 1, k]]
            q, mu = gso(b)
            k = max(k - 1, 1)
    return b.T


@dataclass(frozen=True, eq=False)
class Lattice:
    """The lattice ``basis @ Z^d``; columns of ``basis`` are the generators."""

    basis: np.ndarray
    name: str | None = None
    det_abs: float = field(init=False)

    def __post_init__(self):
        b = np.array(self.basis, dtype=float)
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)
        object.__setattr__(self, "det_abs", abs(float(np.linalg.det(b))))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def gram(self) -> np.ndarray:
        return self.basis.T @ self.basis

    @functools.cached_property
    def cell_moments(self) -> tuple[float, float]:
        """(radius, mean squared radius) of a fundamental parallelepiped centred on a point.

        The farthest point of a cell is a vertex, so the radius of the cell of
        basis B is the largest half-diagonal max |B s| / 2 over sign vectors s.
        The mean of |y|^2 over the same cell is sum |b_i|^2 / 12. Every basis
        gives a valid cell; the smaller of the given and the LLL-reduced basis
        is used.
        """
        best = None
        for b in (self.basis, lll_reduce(self.basis)):
            m = (_half_diagonal(b), float((b * b).sum()) / 12)
            if best is None or m[0] < best[0]:
                best = m
        return best

    @property
    def cell_radius(self) -> float:
        return self.cell_moments[0]

    def scaled(self, lam: float) -> "Lattice":
        return Lattice(lam * self.basis, self.name)

    def unit_density(self) -> "Lattice":
        return self.scaled(self.det_abs ** (-1.0 / self.dim))

    def __repr__(self):
        label = self.name or "Lattice"
        return f"<{label} d={self.dim} det={self.det_abs:.6g}>"


@dataclass(frozen=True)
class DomainPoint2D:
    """Point of the half fundamental domain 0 <= x <= 1/2, x^2 + y^2 >= 1."""

    x: float
    y: float

    def __post_init__(self):
        tol = 1e-12
        if not (-tol <= self.x <= 0.5 + tol) or self.x**2 + self.y**2 < 1 - tol or self.y <= 0:
            raise OutOfDomain(f"({self.x}, {self.y}) is outside the fundamental domain",
                              x=self.x, y=self.y)


TRIANGULAR_CORNER = (0.5, math.sqrt(3) / 2)


@dataclass(frozen=True, eq=False)
class ShellSeries:
    """Distinct squared norms ``r2`` of nonzero points with |p| <= r_max and
    their multiplicities."""

    r2: np.ndarray
    mult: np.ndarray
    r_max: float

    def __len__(self):
        return len(self.r2)

    @property
    def entries(self) -> list[tuple[float, int]]:
        return [(float(a), int(b)) for a, b in zip(self.r2, self.mult)]

    @property
    def total(self) -> int:
        return int(self.mult.sum())

    def truncate(self, r_max: float) -> "ShellSeries":
        keep = self.r2 <= r_max * r_max * (1 + 1e-12)
        return ShellSeries(self.r2[keep], self.mult[keep], r_max)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("r2,mult\n")
        for a, b in zip(self.r2, self.mult):
            buf.write(f"{float(a):.12g},{int(b)}\n")
        return buf.getvalue()


def make_lattice(basis, name: str | None = None) -> Lattice:
    b = np.atleast_2d(np.asarray(basis, dtype=float))
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise SingularBasis(f"basis must be square, got shape {b.shape}")
    scale = float(np.prod(np.linalg.norm(b, axis=0)))
    det = abs(float(np.linalg.det(b)))
    if scale == 0 or det <= 1e3 * np.finfo(float).eps * scale:
        raise SingularBasis("basis is singular", det=det)
    return Lattice(b, name)


def _special_basis(name: str) -> np.ndarray:
    s3 = math.sqrt(3)
    if name == "Z2":
        return np.eye(2)
    if name == "A2":
        return np.array([[1.0, 0.5], [0.0, s3 / 2]])
    if name == "Lambda1":
        return math.sqrt(2 / s3) * _special_basis("A2")
    if name == "Z3":
        return np.eye(3)
    if name == "D3":
        return 2 ** (-1 / 3) * np.array([[0, 1, 1], [1, 0, 1], [1, 1, 0]], dtype=float)
    if name == "D3star":
        return 2 ** (1 / 3) * np.array([[1, 0, 0.5], [0, 1, 0.5], [0, 0, 0.5]])
    if name == "D4":
        # {x in Z^4 : sum x even}, determinant 2
        b = np.array([[1, 1, 0, 0], [1, -1, 1, 0], [0, 0, -1, 1], [0, 0, 0, -1]], dtype=float)
        return 2 ** (-1 / 4) * b
    if name == "E8":
        # D8 plus the glue vector (1/2)^8; already unimodular
        b = np.zeros((8, 8))
        b[0, 0] = 2.0
        for j in range(1, 7):
            b[j - 1, j] = -1.0
            b[j, j] = 1.0
        b[:, 7] = 0.5
        return b
    raise UnknownLattice(f"unknown lattice {name!r}", name=name)


SPECIAL_LATTICES = ("Z2", "A2", "Lambda1", "Z3", "D3", "D3star", "D4", "E8")


def special_lattice(name: str) -> Lattice:
    """Named lattices: Z2 and A2 have unit shortest vector, the rest unit density."""
    return make_lattice(_special_basis(name), name)


def dual(L: Lattice) -> Lattice:
    name = f"{L.name}*" if L.name else None
    return Lattice(np.linalg.inv(L.basis).T, name)


def from_domain_point(p) -> Lattice:
    """Unit-density lattice with quadratic form ((m + n x)^2 + n^2 y^2) / y."""
    if not isinstance(p, DomainPoint2D):
        p = DomainPoint2D(*p)
    s = 1.0 / math.sqrt(p.y)
    return Lattice(s * np.array([[1.0, p.x], [0.0, p.y]]), f"L({p.x:.10g},{p.y:.10g})")


def _integral_scale(gram: np.ndarray) -> int | None:
    for k in range(1, 25):
        g = gram * k
        if np.all(np.abs(g - np.round(g)) <= 1e-12 * max(1.0, float(np.abs(g).max()))):
            return k
    return None


def _enumerate_chunks(gram: np.ndarray, r2max: float, cap: int):
    """Fincke-Pohst enumeration of integer vectors with x^T G x <= r2max.

    Yields integer coordinate arrays of shape (n, d), chunked on the last
    coordinate.
    """
    d = len(gram)
    R = np.linalg.cholesky(gram).T
    rd = np.diag(R)
    diag = rd**2
    mu = R / rd[:, None]
    eps = 1e-9
    w = math.sqrt(r2max / diag[d - 1])
    top = np.arange(math.ceil(-w - eps), math.floor(w + eps) + 1)
    # expected count from the volume of the ball
    vol = math.pi ** (d / 2) / math.gamma(d / 2 + 1) * r2max ** (d / 2) / math.sqrt(np.linalg.det(gram))
    if vol > cap:
        raise EnumerationTooLarge(f"about {vol:.3g} points requested, cap is {cap}", cap=cap)
    seen = 0
    per = max(1, int(len(top) * _CHUNK / max(vol, 1.0)))
    for start in range(0, len(top), per):
        xs = top[start:start + per]
        X = np.zeros((len(xs), d), dtype=np.int64)
        X[:, d - 1] = xs
        T = r2max - diag[d - 1] * xs.astype(float) ** 2
        for i in range(d - 2, -1, -1):
            c = -(X[:, i + 1:] @ mu[i, i + 1:])
            wi = np.sqrt(np.maximum(T, 0.0) / diag[i])
            lo = np.ceil(c - wi - eps)
            hi = np.floor(c + wi + eps)
            n = np.maximum(hi - lo + 1, 0).astype(np.int64)
            total = int(n.sum())
            if seen + total > cap:
                raise EnumerationTooLarge(f"enumeration exceeded cap {cap}", cap=cap)
            rows = np.repeat(np.arange(len(X)), n)
            offs = np.arange(total) - np.repeat(np.cumsum(n) - n, n)
            xi = lo[rows] + offs
            X = X[rows]
            X[:, i] = xi.astype(np.int64)
            T = T[rows] - diag[i] * (xi - c[rows]) ** 2
        seen += len(X)
        yield X


def _group(r2: np.ndarray, mult: np.ndarray, rtol: float):
    order = np.argsort(r2, kind="stable")
    r2 = r2[order]
    mult = mult[order]
    if len(r2) == 0:
        return r2, mult
    brk = np.empty(len(r2), dtype=bool)
    brk[0] = True
    brk[1:] = np.diff(r2) > rtol * r2[1:]
    idx = np.cumsum(brk) - 1
    m = np.bincount(idx, weights=mult).astype(np.int64)
    firsts = r2[brk]
    return firsts, m


def shells(L: Lattice, r_max: float, cap: int = DEFAULT_POINT_CAP) -> ShellSeries:
    """Exact shell decomposition of the nonzero points of L in the closed ball r_max."""
    if not r_max > 0:
        raise ValueError("r_max must be positive")
    gram = L.gram
    k = _integral_scale(gram)
    r2max = r_max * r_max
    if k is not None:
        gk = np.round(gram * k).astype(np.int64)
        lim = math.floor(r2max * k * (1 + 1e-12) + 1e-9)
        keys, counts = [], []
        for X in _enumerate_chunks(gram, r2max * (1 + 1e-12), cap):
            q = np.einsum("ij,jk,ik->i", X, gk, X)
            q = q[(q > 0) & (q <= lim)]
            u, c = np.unique(q, return_counts=True)
            keys.append(u)
            counts.append(c)
        if keys:
            u, inv = np.unique(np.concatenate(keys), return_inverse=True)
            m = np.bincount(inv, weights=np.concatenate(counts)).astype(np.int64)
        else:
            u, m = np.zeros(0, np.int64), np.zeros(0, np.int64)
        return ShellSeries(u.astype(float) / k, m, r_max)
    vals, mults = [], []
    for X in _enumerate_chunks(gram, r2max * (1 + 1e-12), cap):
        Xf = X.astype(float)
        q = np.einsum("ij,jk,ik->i", Xf, gram, Xf)
        q = q[(q > 1e-300) & (q <= r2max * (1 + 1e-12))]
        a, b = _group(q, np.ones(len(q), dtype=np.int64), SHELL_RTOL)
        vals.append(a)
        mults.append(b)
    if vals:
        a, b = _group(np.concatenate(vals), np.concatenate(mults), SHELL_RTOL)
    else:
        a, b = np.zeros(0), np.zeros(0, np.int64)
    return ShellSeries(a, b, r_max)


def shortest_length(L: Lattice) -> float:
    r = float(np.linalg.norm(L.basis, axis=0).min())
    s = shells(L, r * (1 + 1e-9))
    return math.sqrt(float(s.r2[0]))


def kissing_number(L: Lattice) -> int:
    r = float(np.linalg.norm(L.basis, axis=0).min())
    s = shells(L, r * (1 + 1e-9))
    return int(s.mult[0])


def count_points(L: Lattice, r: float, cap: int = DEFAULT_POINT_CAP) -> int:
    """Number of nonzero lattice points in the closed ball of radius r."""
    return shells(L, r, cap).total


def ball_volume(d: int) -> float:
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1)


class ShellCache:
    """Grow-only shell table for one lattice, safe to share between threads."""

    def __init__(self, L: Lattice, cap: int = DEFAULT_POINT_CAP):
        self.lattice = L
        self.cap = cap
        self._lock = threading.Lock()
        self._series: ShellSeries | None = None

    def get(self, r_max: float) -> ShellSeries:
        with self._lock:
            s = self._series
            if s is None or s.r_max < r_max:
                s = shells(self.lattice, r_max, self.cap)
                self._series = s
        if s.r_max > r_max:
            return s.truncate(r_max)
        return s

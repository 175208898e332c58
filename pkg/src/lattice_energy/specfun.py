"""Special functions and lattice transcendental functions.

Epstein zeta values for s close to the dimension are obtained from the
theta-function splitting

    pi^{-s/2} Gamma(s/2) zeta_L(s) = sum_{p != 0} T(s/2, pi |p|^2)
                                    + sum_{q* != 0} T((d - s)/2, pi |q|^2)
                                    + 2/(s - d) - 2/s

for a unit-covolume lattice, where T(a, x) = int_1^inf exp(-x t) t^(a-1) dt.
Both sums converge like Gaussians. For s well above d the plain lattice sum
converges quickly and is used instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import DivergentExponent, DomainError, NoConvergence
from .lattice import Lattice, ball_volume, dual, shells, shortest_length

DEFAULT_TOL = 1e-10
# s - d at and above which the direct lattice sum is used for zeta.
DIRECT_MARGIN = 12.0
EULER_GAMMA = 0.57721566490153286061


@dataclass(frozen=True)
class EvalResult:
    value: float
    tail_bound: float
    r_max_used: float


# ---------------------------------------------------------------- scalars

def riemann_zeta(s: float) -> float:
    if not s > 1:
        raise DomainError(f"riemann_zeta needs s > 1, got {s}", s=s)
    return float(special.zeta(s, 1))


def gamma_fn(s: float) -> float:
    if not s > 0:
        raise DomainError(f"gamma_fn needs s > 0, got {s}", s=s)
    return float(special.gamma(s))


def digamma(x: float) -> float:
    if not x > 0:
        raise DomainError(f"digamma needs x > 0, got {x}", x=x)
    return float(special.psi(x))


def digamma_inverse(y: float, tol: float = 1e-12, max_iter: int = 200) -> float:
    """Solve digamma(x) = y for x > 0 (digamma is increasing on (0, inf))."""
    if not math.isfinite(y):
        raise DomainError("digamma_inverse needs a finite argument", y=y)
    x = math.exp(y) + 0.5 if y >= -2.22 else -1.0 / (y + EULER_GAMMA)
    for _ in range(max_iter):
        r = float(special.psi(x)) - y
        step = r / float(special.polygamma(1, x))
        nx = x - step
        while nx <= 0:
            step *= 0.5
            nx = x - step
        if abs(nx - x) <= tol * max(1.0, abs(nx)):
            return nx
        x = nx
    raise NoConvergence("digamma_inverse did not converge", y=y, iterations=max_iter)


def _gcf_scaled(a, x, max_iter=2000):
    # modified Lentz evaluation of the continued fraction for Gamma(a, x),
    # returned as exp(x) x^(-a) Gamma(a, x); reliable for x >= 1
    tiny = 1e-300
    b = x + 1.0 - a
    c = np.full_like(x, 1.0 / tiny)
    d = 1.0 / b
    h = d.copy()
    for i in range(1, max_iter):
        an = -i * (i - a)
        b = b + 2.0
        d = an * d + b
        d = np.where(np.abs(d) < tiny, tiny, d)
        c = b + an / c
        c = np.where(np.abs(c) < tiny, tiny, c)
        d = 1.0 / d
        delta = d * c
        h = h * delta
        if np.all(np.abs(delta - 1.0) < 4e-16):
            return h
    raise NoConvergence("incomplete gamma continued fraction did not converge")


def _upper_gamma_small_x(a: float, x: np.ndarray) -> np.ndarray:
    # Gamma(a, x) for 0 < x < 1 and any real a, by upward-shifted start and
    # the downward recurrence Gamma(b-1, x) = (Gamma(b, x) - x^(b-1) e^-x)/(b-1)
    if a > 0:
        return special.gammaincc(a, x) * special.gamma(a)
    if a == round(a):
        k = int(-round(a))
        b = 0.0
        g = special.exp1(x)
    else:
        k = math.ceil(-a)
        b = a + k
        g = special.gammaincc(b, x) * special.gamma(b)
    ex = np.exp(-x)
    for _ in range(k):
        g = (g - x ** (b - 1.0) * ex) / (b - 1.0)
        b -= 1.0
    return g


def upper_gamma_scaled(a, x):
    """T(a, x) = x^(-a) Gamma(a, x) = int_1^inf e^(-x t) t^(a-1) dt.

    Valid for every real a (including a <= 0) and x > 0; vectorized in x.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    big = x >= 1.0
    if big.any():
        xb = x[big]
        out[big] = np.exp(-xb) * _gcf_scaled(float(a), xb)
    small = ~big
    if small.any():
        xs = x[small]
        out[small] = xs ** (-a) * _upper_gamma_small_x(float(a), xs)
    return out


def upper_gamma(a: float, x):
    """Upper incomplete gamma Gamma(a, x) for real a and x > 0."""
    x = np.asarray(x, dtype=float)
    return x**a * upper_gamma_scaled(a, x)


def _log_moment(a: float, x: float) -> float:
    # J(a, x) = int_1^inf e^(-x t) t^(a-1) log t dt
    if x > 700:
        return 0.0
    scale = math.exp(-x)
    val, _ = integrate.quad(lambda u: math.exp(-x * u) * (1 + u) ** (a - 1) * math.log1p(u),
                            0, np.inf, epsabs=0, epsrel=1e-13, limit=200)
    return scale * val


# ---------------------------------------------------------------- tail bounds

def sphere_area(d: int) -> float:
    return d * ball_volume(d)


def annulus_power_bound(K: float, x: float, u0: float, delta: float, d: int, covol: float) -> float:
    """Bound on sum_{|p| > u0 + 2 delta} K |p|^(-x) over a lattice with the given
    covolume and cell radius delta."""
    if x <= d:
        return math.inf
    if u0 <= 0:
        return math.inf
    tot = 0.0
    for k in range(d):
        e = k + 1 - x
        with np.errstate(over="ignore"):
            term = math.comb(d - 1, k) * delta ** (d - 1 - k) * float(np.power(u0, e)) / (x - k - 1)
        tot += term
    return sphere_area(d) / covol * K * tot


def annulus_gauss_bound(K: float, beta: float, u0: float, delta: float, d: int, covol: float) -> float:
    """Bound on sum_{|p| > u0 + 2 delta} K exp(-beta |p|^2)."""
    if u0 <= 0:
        return math.inf
    tot = 0.0
    z = beta * u0 * u0
    for k in range(d):
        h = (k + 1) / 2
        ik = special.gammaincc(h, z) * special.gamma(h) / (2 * beta**h)
        tot += math.comb(d - 1, k) * delta ** (d - 1 - k) * ik
    return sphere_area(d) / covol * K * tot


def cell_gauss_bound(K: float, beta: float, rho: float, sigma2: float, d: int, covol: float) -> float:
    """Bound on sum_{|p| > rho + delta} K exp(-beta |p|^2), delta the cell radius.

    Averaging over a centrally symmetric cell C_p and Jensen give
    exp(-beta |p|^2) <= exp(beta sigma2) mean_{C_p} exp(-beta |x|^2), with
    sigma2 the mean of |y|^2 over the cell. The cells lie outside |x| > rho.
    """
    if rho <= 0 or rho * rho <= sigma2:
        return math.inf
    h = d / 2
    tail = special.gammaincc(h, beta * rho * rho) * special.gamma(h) / (2 * beta**h)
    if tail == 0:
        return 0.0
    return sphere_area(d) / covol * K * math.exp(beta * sigma2 + math.log(tail))


def point_count_error(r: float, delta: float, d: int, covol: float) -> float:
    """|N(r) - omega_d r^d / covol| for N counting all points (origin included)."""
    w = ball_volume(d) / covol
    return w * ((r + delta) ** d - r**d)


# ---------------------------------------------------------------- Epstein zeta

def _check_exponent(L: Lattice, s: float):
    if not s > L.dim:
        raise DivergentExponent(f"Epstein zeta diverges for s = {s} <= d = {L.dim}", s=s, d=L.dim)


def _zeta_direct(L: Lattice, s: float, tol: float, deriv: bool = False) -> EvalResult:
    d = L.dim
    delta = L.cell_radius
    m = shortest_length(L)
    R = 2 * delta + 2 * m
    eta = (s - d) / 2
    while True:
        sh = shells(L, R)
        r = np.sqrt(sh.r2)
        if deriv:
            value = float(-(sh.mult * np.log(r) * r ** (-s)).sum())
            # log u <= u^eta / (e eta)
            bound = annulus_power_bound(1.0 / (math.e * eta), s - eta, R - 2 * delta, delta, d, L.det_abs)
        else:
            value = float((sh.mult * r ** (-s)).sum())
            bound = annulus_power_bound(1.0, s, R - 2 * delta, delta, d, L.det_abs)
        if bound <= tol * abs(value):
            return EvalResult(value, bound, R)
        R *= 1.5


def _ewald_parts(L: Lattice, tol: float):
    U = L.unit_density()
    D = dual(U)
    delta = max(U.cell_radius, D.cell_radius)
    u0 = math.sqrt(math.log(1e3 / tol) / math.pi + max(U.cell_moments[1], D.cell_moments[1]))
    return U, D, delta, u0


def _ewald_tail(U: Lattice, D: Lattice, a1: float, a2: float, rho: float) -> float:
    """Bound on the Ewald sums of T(a1, pi|p|^2) over U and T(a2, pi|q|^2) over
    D = U*, restricted to |p|, |q| > rho + delta. Uses T(a, x) <= e^-x / (x - max(a - 1, 0))."""
    d = U.dim
    tot = 0.0
    for M, a in ((U, a1), (D, a2)):
        sig2 = M.cell_moments[1]
        den = math.pi * (rho * rho - sig2) - max(a - 1, 0)
        if den <= 0:
            return math.inf
        tot += cell_gauss_bound(1 / den, math.pi, rho, sig2, d, 1.0)
    return tot


def epstein_zeta_many(L: Lattice, s_values, tol: float = DEFAULT_TOL) -> list[EvalResult]:
    """zeta_L(s) for several exponents, sharing one shell enumeration."""
    s_values = [float(s) for s in s_values]
    for s in s_values:
        _check_exponent(L, s)
    d = L.dim
    out: list[EvalResult | None] = [None] * len(s_values)
    ew = [i for i, s in enumerate(s_values) if s - d < DIRECT_MARGIN]
    for i, s in enumerate(s_values):
        if i not in ew:
            out[i] = _zeta_direct(L, s, tol)
    if ew:
        U, D, delta, u0 = _ewald_parts(L, tol)
        V = L.det_abs
        while True:
            R = u0 + delta
            sp = shells(U, R)
            sd = shells(D, R)
            xp = math.pi * sp.r2
            xd = math.pi * sd.r2
            ok = True
            res = []
            for i in ew:
                s = s_values[i]
                a1, a2 = s / 2, (d - s) / 2
                gb = _ewald_tail(U, D, a1, a2, u0)
                if not math.isfinite(gb):
                    ok = False
                    break
                G = float((sp.mult * upper_gamma_scaled(a1, xp)).sum())
                G += float((sd.mult * upper_gamma_scaled(a2, xd)).sum())
                G += 2 / (s - d) - 2 / s
                P = math.pi ** (-s / 2) * math.gamma(s / 2)
                scale = V ** (-s / d)
                val = G / P * scale
                bound = gb / P * scale
                if bound > tol * abs(val):
                    ok = False
                    break
                res.append(EvalResult(val, bound, R * V ** (1 / d)))
            if ok:
                for i, r in zip(ew, res):
                    out[i] = r
                break
            u0 *= 1.25
    return out  # type: ignore[return-value]


def epstein_zeta(L: Lattice, s: float, tol: float = DEFAULT_TOL) -> EvalResult:
    """zeta_L(s) = sum over nonzero p of |p|^(-s), for s > dim L."""
    return epstein_zeta_many(L, [s], tol)[0]


def log_epstein_zeta(L: Lattice, s: float, tol: float = DEFAULT_TOL) -> float:
    """log zeta_L(s), safe for large s where zeta_L(s) itself overflows."""
    _check_exponent(L, s)
    m = shortest_length(L)
    z = epstein_zeta(L.scaled(1.0 / m), s, tol).value
    return -s * math.log(m) + math.log(z)


def epstein_zeta_deriv(L: Lattice, s: float, tol: float = DEFAULT_TOL) -> EvalResult:
    """d/ds zeta_L(s) = -sum log|p| |p|^(-s)."""
    _check_exponent(L, s)
    d = L.dim
    if s - d >= DIRECT_MARGIN:
        return _zeta_direct(L, s, tol, deriv=True)
    U, D, delta, u0 = _ewald_parts(L, tol)
    V = L.det_abs
    a1, a2 = s / 2, (d - s) / 2
    while True:
        R = u0 + delta
        # J(a, x) <= T(a + 1, x), so the a + 1 envelope bounds the log moments
        gb = _ewald_tail(U, D, a1 + 1, a2 + 1, u0)
        gbz = _ewald_tail(U, D, a1, a2, u0)
        if not math.isfinite(gb):
            u0 *= 1.25
            continue
        sp = shells(U, R)
        sd = shells(D, R)
        xp = math.pi * sp.r2
        xd = math.pi * sd.r2
        G = float((sp.mult * upper_gamma_scaled(a1, xp)).sum())
        G += float((sd.mult * upper_gamma_scaled(a2, xd)).sum())
        G += 2 / (s - d) - 2 / s
        Jp = sum(int(m) * _log_moment(a1, float(x)) for m, x in zip(sp.mult, xp))
        Jd = sum(int(m) * _log_moment(a2, float(x)) for m, x in zip(sd.mult, xd))
        dG = 0.5 * Jp - 0.5 * Jd - 2 / (s - d) ** 2 + 2 / s**2
        P = math.pi ** (-s / 2) * math.gamma(s / 2)
        dlogP = -0.5 * math.log(math.pi) + 0.5 * float(special.psi(s / 2))
        Z = G / P
        dZ = (dG - G * dlogP) / P
        scale = V ** (-s / d)
        val = scale * (dZ - math.log(V) / d * Z)
        bound = scale * (0.5 * gb + abs(dlogP) * gbz + abs(math.log(V)) / d * gbz) / P
        if bound <= tol * max(abs(val), 1e-300):
            return EvalResult(val, bound, R * V ** (1 / d))
        u0 *= 1.25


# ---------------------------------------------------------------- theta

class ThetaEvaluator:
    """Evaluates theta_L(alpha) - 1 for many alpha with cached shells of L and L*.

    Direct summation for alpha >= 1, the Jacobi transform for alpha < 1.
    """

    def __init__(self, L: Lattice, tol: float = DEFAULT_TOL):
        self.lattice = L
        self.tol = tol
        self.d = L.dim
        self.covol = L.det_abs
        self._sides = {}
        for key, M in (("direct", L), ("dual", dual(L))):
            m = shortest_length(M)
            delta, sig2 = M.cell_moments
            # alpha >= 1 on either side, so pi is the smallest Gaussian rate
            u0 = math.sqrt(m * m + sig2 + math.log(1e2 / tol) / math.pi)
            while True:
                b = cell_gauss_bound(1.0, math.pi, u0, sig2, self.d, M.det_abs)
                if b <= 1e-3 * tol * math.exp(-math.pi * m * m):
                    break
                u0 *= 1.2
            sh = shells(M, u0 + delta)
            self._sides[key] = (sh, M, sig2, u0)

    def _side(self, key: str, alpha: float):
        sh, M, sig2, u0 = self._sides[key]
        beta = math.pi * alpha
        s = float((sh.mult * np.exp(-beta * sh.r2)).sum())
        b = cell_gauss_bound(1.0, beta, u0, sig2, self.d, M.det_abs)
        return s, b, sh.r_max

    def minus_one(self, alpha: float) -> EvalResult:
        if not alpha > 0:
            raise DomainError("theta needs alpha > 0", alpha=alpha)
        if alpha >= 1:
            s, b, r = self._side("direct", alpha)
            return EvalResult(s, b, r)
        c = alpha ** (-self.d / 2) / self.covol
        s, b, r = self._side("dual", 1.0 / alpha)
        return EvalResult(c * (1.0 + s) - 1.0, c * b, r)

    def __call__(self, alpha: float) -> EvalResult:
        r = self.minus_one(alpha)
        return EvalResult(1.0 + r.value, r.tail_bound, r.r_max_used)


def lattice_theta(L: Lattice, alpha: float, tol: float = DEFAULT_TOL) -> EvalResult:
    """theta_L(alpha) = sum over all p in L of exp(-pi alpha |p|^2)."""
    return ThetaEvaluator(L, tol)(alpha)


def lattice_theta_direct(L: Lattice, alpha: float, tol: float = DEFAULT_TOL) -> EvalResult:
    """Plain summation without the Jacobi transform (slow for small alpha)."""
    d = L.dim
    delta, sig2 = L.cell_moments
    m = shortest_length(L)
    beta = math.pi * alpha
    u0 = math.sqrt(m * m + sig2 + math.log(1e2 / tol) / beta)
    while cell_gauss_bound(1.0, beta, u0, sig2, d, L.det_abs) > tol:
        u0 *= 1.2
    sh = shells(L, u0 + delta)
    s = 1.0 + float((sh.mult * np.exp(-beta * sh.r2)).sum())
    return EvalResult(s, cell_gauss_bound(1.0, beta, u0, sig2, d, L.det_abs), sh.r_max)

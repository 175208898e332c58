"""Acceptance criteria 1-12, one test each.

Every test prints a single PASS/FAIL line (also repeated in the terminal
summary) listing any failed sub-checks with the observed values.
"""

import math
import time

import numpy as np

from lattice_energy.energy import energy_direct, energy_theta_integral
from lattice_energy.lattice import (
    count_points,
    dual,
    from_domain_point,
    kissing_number,
    make_lattice,
    shells,
    special_lattice,
)
from lattice_energy.ljopt import H_function, LJParams, min_energy_ratio, min_energy_ratio_grid, optimal_scale
from lattice_energy.potentials import LennardJones, f_epsilon, v_counterexample
from lattice_energy.scan import (
    CValue,
    GridSpec,
    c_function,
    discriminant,
    epsilon_zero,
    h_eps,
    nonminimality_window,
    onewell_verify_appendix,
    refine_minimum,
    scan_domain,
    verify_all_scales_optimality,
)
from lattice_energy.specfun import (
    ThetaEvaluator,
    digamma_inverse,
    epstein_zeta,
    lattice_theta_direct,
    riemann_zeta,
)

SQ3 = math.sqrt(3)


def _close(x, ref, tol):
    return abs(x - ref) <= tol


def _random_lattice(rng, d):
    while True:
        B = rng.normal(size=(d, d)) + 1.5 * np.eye(d)
        s = np.linalg.svd(B, compute_uv=False)
        if s[-1] > 0.3 and s[0] / s[-1] < 6:
            return make_lattice(B).unit_density()


def _domain_point(rng):
    while True:
        x, y = rng.uniform(0, 0.5), rng.uniform(SQ3 / 2, 4.0)
        if x * x + y * y >= 1 and math.hypot(x - 0.5, y - SQ3 / 2) > 1e-3:
            return x, y


def test_criterion_01_special_function_goldens(acceptance_report):
    t = time.perf_counter()
    z = {s: riemann_zeta(s) for s in (4, 6, 8)}
    psi = 2 * digamma_inverse(math.log(math.pi)) - 2
    el = time.perf_counter() - t
    acceptance_report(1, "special-function goldens", {
        f"zeta(4) = {z[4]!r}": _close(z[4], math.pi**4 / 90, 1e-12),
        f"zeta(6) = {z[6]!r}": _close(z[6], math.pi**6 / 945, 1e-12),
        f"zeta(8) = {z[8]!r}": _close(z[8], math.pi**8 / 9450, 1e-12),
        f"2 psi^-1(log pi) - 2 = {psi!r}": _close(psi, 5.256, 1e-3),
        "runtime < 1 s": el < 1.0,
    }, el)


def test_criterion_02_jacobi_identity(acceptance_report):
    t = time.perf_counter()
    rng = np.random.default_rng(20240602)
    worst = 0.0
    for i in range(100):
        L = _random_lattice(rng, 2 + i % 2)
        D = dual(L)
        d = L.dim
        for a in (0.2, 0.5, 1.0, 2.0, 5.0):
            # both sides by plain summation, no transform inside the evaluator
            lhs = lattice_theta_direct(L, a, tol=1e-13).value
            rhs = a ** (-d / 2) / L.det_abs * lattice_theta_direct(D, 1 / a, tol=1e-13).value
            worst = max(worst, abs(lhs - rhs))
    el = time.perf_counter() - t
    acceptance_report(2, "Jacobi identity", {
        f"max residual = {worst:.3g}": worst <= 1e-10,
        "runtime < 10 s": el < 10.0,
    }, el)


def test_criterion_03_montgomery_grid(acceptance_report):
    t = time.perf_counter()
    alphas = (0.5, 1.0, 2.0)
    ref = ThetaEvaluator(special_lattice("Lambda1"))
    tref = {a: ref(a).value for a in alphas}
    bad = []
    n = 0
    for x in np.linspace(0.0, 0.5, 50):
        for y in np.linspace(SQ3 / 2, 3.0, 50):
            if x * x + y * y < 1 or math.hypot(x - 0.5, y - SQ3 / 2) < 1e-9:
                continue
            ev = ThetaEvaluator(from_domain_point((x, y)))
            n += 1
            for a in alphas:
                if not tref[a] < ev(a).value:
                    bad.append((x, y, a))
    el = time.perf_counter() - t
    acceptance_report(3, f"Montgomery property on {n} grid lattices", {
        f"violations = {bad[:3]}": not bad,
        "runtime < 60 s": el < 60.0,
    }, el)


def test_criterion_04_c_counterexample_pipeline(acceptance_report):
    t = time.perf_counter()
    spec = GridSpec()
    field = scan_domain(CValue(), spec)
    m = refine_minimum(CValue(), field)
    far = [c_function((x, 200.0)) for x in (0.0, 0.25, 0.5)]
    near = c_function((0.5 - 1e-4, SQ3 / 2 + 1e-4))
    e0 = epsilon_zero(0.769)
    ok_lo, _ = verify_all_scales_optimality(1.148, spec)
    ok_hi, _ = verify_all_scales_optimality(1.3, spec)
    el = time.perf_counter() - t
    acceptance_report(4, "c(x, y) counterexample pipeline", {
        f"min c = {m.value:.7f} vs 0.7699393 +- 1e-4": _close(m.value, 0.7699393, 1e-4),
        f"argmin x = {m.x:.7f} vs 0.2607474 +- 1e-3": _close(m.x, 0.2607474, 1e-3),
        f"argmin y = {m.y:.7f} vs 0.9654071 +- 1e-3": _close(m.y, 0.9654071, 1e-3),
        f"c at y = 200: {[round(v, 5) for v in far]}": all(abs(v / 1.05 - 1) <= 1e-2 for v in far),
        f"c near corner = {near:.7f}": _close(near, 0.7719234, 5e-3),
        f"epsilon_zero(0.769) = {e0:.8f}": _close(e0, 1.1485753, 1e-5),
        "verify at eps = 1.148 is true": ok_lo,
        "verify at eps = 1.3 is false": not ok_hi,
        "runtime < 300 s": el < 300.0,
    }, el)


def test_criterion_05_lj_ratios(acceptance_report):
    t = time.perf_counter()
    A, Z = special_lattice("A2"), special_lattice("Z2")
    g = min_energy_ratio_grid(A, Z, range(3, 51))
    far = min_energy_ratio(A, Z, 200.0, 400.0)
    inc_x1 = all(g[(x1 + 1, x2)] > v for (x1, x2), v in g.items() if (x1 + 1, x2) in g)
    inc_x2 = all(g[(x1, x2 + 1)] > v for (x1, x2), v in g.items() if (x1, x2 + 1) in g)
    el = time.perf_counter() - t
    acceptance_report(5, "Lennard-Jones energy ratios", {
        f"ratio(3, 4) = {g[(3, 4)]:.6f}": _close(g[(3, 4)], 1.061, 5e-3),
        f"ratio(49, 50) = {g[(49, 50)]:.6f}": _close(g[(49, 50)], 1.499, 5e-3),
        f"ratio(200, 400) = {far:.6f}": _close(far, 1.5, 5e-3),
        "increasing in x1": inc_x1,
        "increasing in x2": inc_x2,
        "runtime < 120 s": el < 120.0,
    }, el)


def test_criterion_06_optimal_scale_limit(acceptance_report):
    t = time.perf_counter()
    checks = {}
    for name in ("Z2", "A2"):
        L = special_lattice(name)
        L = L.scaled(1.0 / math.sqrt(shells(L, 2.0).r2[0]))  # unit shortest vector
        for r0 in (1.0, 2.0):
            lam0 = optimal_scale(L, LJParams.with_minimum_at(r0, 200.0, 400.0))
            checks[f"{name} r0 = {r0}: lam0 = {lam0:.8f}"] = abs(lam0 - math.sqrt(r0)) < 1e-3
    el = time.perf_counter() - t
    checks["runtime < 10 s"] = el < 10.0
    acceptance_report(6, "optimal scale tends to the potential minimum", checks, el)


def test_criterion_07_h_monotone(acceptance_report):
    t = time.perf_counter()
    L1, Z2 = special_lattice("Lambda1"), special_lattice("Z2")
    Z3, D3, D3s = (special_lattice(n) for n in ("Z3", "D3", "D3star"))
    cases = [("H_Z2 vs Lambda1", Z2, L1, 2.1), ("H_Z3 vs D3", Z3, D3, 4.0),
             ("H_Z3 vs D3*", Z3, D3s, 4.0), ("H_D3* vs D3", D3s, D3, 4.0)]
    checks = {}
    for label, L, Lam, lo in cases:
        v = np.array([H_function(L, Lam, x) for x in np.linspace(lo, 50.0, 500)])
        d = np.diff(v)
        checks[f"{label} strictly increasing (min step {d.min():.3g})"] = bool((d > 0).all())
    el = time.perf_counter() - t
    checks["runtime < 120 s"] = el < 120.0
    acceptance_report(7, "H functions increasing", checks, el)


def test_criterion_08_onewell_constructions(acceptance_report):
    t = time.perf_counter()
    c = onewell_verify_appendix(50.0, "continuous")
    h = onewell_verify_appendix(50.0, "hard_core")
    el = time.perf_counter() - t
    cs = c.critical_scales
    acceptance_report(8, "one-well constructions", {
        f"continuous Z2 min = {c.square.global_min:.7f} vs -19.108745":
            _close(c.square.global_min, -19.108745, 1e-4),
        f"continuous Z2 argmin = {c.square.global_argmin:.7f}":
            _close(c.square.global_argmin, 1 / math.sqrt(5), 1e-9),
        f"continuous A2 min = {c.triangular.global_min:.7f} vs -19.013358":
            _close(c.triangular.global_min, -19.013358, 1e-4),
        f"continuous A2 argmin = {c.triangular.global_argmin:.7f}":
            _close(c.triangular.global_argmin, 4 / 9, 1e-9),
        f"critical scales = {[round(v, 5) for v in cs]}":
            all(_close(v, r, 1e-3) for v, r in zip(cs, (0.4433, 0.6765, 0.9245))),
        f"hard-core Z2 min = {h.square.global_min:.7f} vs -8.5915114":
            _close(h.square.global_min, -8.5915114, 1e-4),
        f"hard-core A2 min = {h.triangular.global_min:.7f} vs -7.7107743":
            _close(h.triangular.global_min, -7.7107743, 1e-4),
        "continuous verdict square beats triangular": c.verdict,
        "hard-core verdict square beats triangular": h.verdict,
        "runtime < 30 s": el < 30.0,
    }, el)


def test_criterion_09_v_window(acceptance_report):
    t = time.perf_counter()
    w = nonminimality_window(v_counterexample(), GridSpec(), (1.0, 3.0), 1e-3)
    el = time.perf_counter() - t
    one = len(w) == 1
    acceptance_report(9, "nonminimality window of V", {
        f"single interval, got {w}": one,
        "lower end within 2e-2 of 1.522": one and _close(w[0][0], 1.522, 2e-2),
        "upper end within 2e-2 of 1.939": one and _close(w[0][1], 1.939, 2e-2),
        "runtime < 120 s": el < 120.0,
    }, el)


def test_criterion_10_method_cross_validation(acceptance_report):
    t = time.perf_counter()
    pots = {"f_eps(0.5)": f_epsilon(0.5), "LJ(1,1,6,12)": LennardJones(1, 1, 6, 12), "V": v_counterexample()}
    lats = {"Lambda1": special_lattice("Lambda1"), "Z2": special_lattice("Z2"),
            "L(0.26, 0.97)": from_domain_point((0.26, 0.97))}
    worst = (0.0, None)
    for pn, f in pots.items():
        for ln, L in lats.items():
            ev = ThetaEvaluator(L, 1e-14)
            for lam in (0.7, 1.0, 1.8):
                a = energy_theta_integral(f, L, lam, evaluator=ev).value
                b = energy_direct(f, L, lam).value
                rel = abs(a - b) / abs(b)
                if rel > worst[0]:
                    worst = (rel, (pn, ln, lam))
    el = time.perf_counter() - t
    acceptance_report(10, "theta integral vs direct summation", {
        f"max relative gap {worst[0]:.3g} at {worst[1]}": worst[0] <= 1e-7,
        "runtime < 60 s": el < 60.0,
    }, el)


def test_criterion_11_kissing_numbers(acceptance_report):
    t = time.perf_counter()
    got = {n: kissing_number(special_lattice(n)) for n in ("A2", "D3", "D4", "E8")}
    el = time.perf_counter() - t
    acceptance_report(11, "kissing numbers by enumeration", {
        f"kissing numbers {got}": got == {"A2": 6, "D3": 12, "D4": 24, "E8": 240},
        "runtime < 30 s": el < 30.0,
    }, el)


def test_criterion_12_property_suite(acceptance_report):
    t = time.perf_counter()
    rng = np.random.default_rng(12)
    n = 1000
    parity = dual_inv = scaling = round_trip = equiv = 0
    for i in range(n):
        L = _random_lattice(rng, 2 + i % 2)
        R = rng.uniform(1.0, 3.0)
        sh = shells(L, R)
        if all(int(m) % 2 == 0 for m in sh.mult) and int(sh.mult.sum()) == count_points(L, R):
            parity += 1
        if np.allclose(dual(dual(L)).basis, L.basis, rtol=1e-12, atol=1e-12):
            dual_inv += 1
        s, k = rng.uniform(L.dim + 0.5, 12.0), rng.uniform(0.3, 3.0)
        a = epstein_zeta(L.scaled(k), s).value
        b = k ** (-s) * epstein_zeta(L, s).value
        if abs(a - b) <= 1e-9 * abs(b):
            scaling += 1
        eps = rng.uniform(1e-4, 20.0)
        if abs(epsilon_zero(h_eps(eps)) - eps) <= 1e-9 * max(1.0, eps):
            round_trip += 1
        p = _domain_point(rng)
        e = rng.uniform(0.0, 4.0)
        if (discriminant(e, p) < 0) == (h_eps(e) < c_function(p)):
            equiv += 1
    el = time.perf_counter() - t
    acceptance_report(12, f"property suite on {n} random draws", {
        f"shell parity and counts {parity}/{n}": parity == n,
        f"dual involution {dual_inv}/{n}": dual_inv == n,
        f"zeta scaling law {scaling}/{n}": scaling == n,
        f"h(eps) round trip {round_trip}/{n}": round_trip == n,
        f"discriminant sign iff h < c {equiv}/{n}": equiv == n,
        "runtime < 60 s": el < 60.0,
    }, el)

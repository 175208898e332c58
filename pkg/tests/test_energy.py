import math

import pytest

from lattice_energy.energy import energy_direct, energy_shell_partial, energy_theta_integral
from lattice_energy.errors import NoDensity
from lattice_energy.lattice import ShellCache, from_domain_point, make_lattice, special_lattice
from lattice_energy.potentials import (
    Callback,
    LennardJones,
    PiecewiseOneWell,
    YukawaDiff,
    f_epsilon,
    v_counterexample,
)
from lattice_energy.specfun import epstein_zeta


@pytest.mark.parametrize("name", ["Z2", "A2", "Lambda1", "D3"])
@pytest.mark.parametrize("lam", [0.8, 1.0, 1.7])
def test_lj_closed_form(name, lam):
    L = special_lattice(name)
    f = LennardJones(1.3, 0.7, 7.0, 12.0)
    ref = 0.7 * lam**-12 * epstein_zeta(L, 12.0).value - 1.3 * lam**-7 * epstein_zeta(L, 7.0).value
    assert energy_direct(f, L, lam).value == pytest.approx(ref, rel=1e-9)


@pytest.mark.parametrize("lam", [1.01, 1.5, 3.0])
def test_onewell_outer_regime(lam):
    Z = special_lattice("Z2")
    e = energy_direct(PiecewiseOneWell(), Z, lam).value
    assert e == pytest.approx(-(lam**-4) * epstein_zeta(Z, 4.0).value, rel=1e-10)


def test_shell_partial():
    f = LennardJones(1, 1, 6, 12)
    Z = special_lattice("Z2")
    full = energy_direct(f, Z, 1.2).value
    assert energy_shell_partial(f, Z, 1.2, 1) == full
    assert energy_shell_partial(f, Z, 1.2, 2) == pytest.approx(full - 4 * float(f(1.44)), rel=1e-12)
    # shells 1, 2 have squared radii 1 and 2, both with multiplicity 4
    third = full - 4 * float(f(1.44)) - 4 * float(f(2 * 1.44))
    assert energy_shell_partial(f, Z, 1.2, 3) == pytest.approx(third, rel=1e-12, abs=1e-14)
    with pytest.raises(ValueError):
        energy_shell_partial(f, Z, 1.2, 0)


def test_doubling_path_converges():
    # Yukawa has no power tail; the doubling loop must meet the tolerance
    f = YukawaDiff(1.0, 2.0, 1.0, 2.0)
    r = energy_direct(f, special_lattice("A2"), 1.0)
    assert r.tail_bound <= 1e-12 * max(abs(r.value), 1.0)
    assert r.value == pytest.approx(energy_theta_integral(f, special_lattice("A2"), 1.0).value, rel=1e-8)


def test_direct_accepts_cache():
    L = special_lattice("Lambda1")
    cache = ShellCache(L)
    f = f_epsilon(0.2)
    a = [energy_direct(f, L, lam, cache=cache).value for lam in (0.9, 1.3)]
    b = [energy_direct(f, L, lam).value for lam in (0.9, 1.3)]
    assert a == pytest.approx(b, rel=1e-14)


@pytest.mark.parametrize("f,name,lam", [
    (f_epsilon(0.0), "Lambda1", 1.0),
    (LennardJones(1, 1, 6, 12), "Z2", 1.3),
    (v_counterexample(), "Lambda1", 1.7),
])
def test_theta_integral_matches_direct(f, name, lam):
    L = special_lattice(name)
    a = energy_theta_integral(f, L, lam).value
    b = energy_direct(f, L, lam).value
    assert a == pytest.approx(b, rel=1e-9)


def test_theta_integral_needs_density():
    with pytest.raises(NoDensity):
        energy_theta_integral(PiecewiseOneWell(), special_lattice("Z2"), 1.0)


def test_scaling_law():
    # E_f[lam L] depends only on the point set lam L
    L = from_domain_point((0.2, 1.4))
    f = f_epsilon(0.3)
    for s in (0.5, 2.0):
        assert energy_direct(f, L.scaled(s), 1.1 / s).value == pytest.approx(
            energy_direct(f, L, 1.1).value, rel=1e-11)


def test_basis_independence():
    f = LennardJones(1, 1, 6, 12)
    A = make_lattice([[1.0, 0.5], [0.0, math.sqrt(3) / 2]])
    B = make_lattice([[1.0, 1.5], [0.0, math.sqrt(3) / 2]])  # same lattice, sheared basis
    assert energy_direct(f, A, 1.05).value == pytest.approx(energy_direct(f, B, 1.05).value, rel=1e-11)


def test_lambda_must_be_positive():
    with pytest.raises(ValueError):
        energy_direct(f_epsilon(0.0), special_lattice("Z2"), 0.0)


def test_callback_doubling():
    f = Callback(lambda r: (r ** -4.0), tail_exponent=8.0, tail_constant=1.0)
    Z = special_lattice("Z2")
    assert energy_direct(f, Z, 1.0, tol=1e-10).value == pytest.approx(epstein_zeta(Z, 8.0).value, rel=1e-9)

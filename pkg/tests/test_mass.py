from __future__ import annotations

from fractions import Fraction

import pytest

from ssmass.mass import (FKERNEL, IntegralityError, census, census_bruteforce, divisors, hecke_orbit_size,
                         index_in_fkernel_group, l_p, mass_lambda_x, mass_superspecial, mass_superspecial_fkernel,
                         mobius, relative_index, sp_group_order, sp_group_order_bruteforce, stratum_count)
from ssmass.suites import primes_up_to
from ssmass.xi import Case, XiClass, classify, generic_point, psl2_order


def test_g1_eichler():
    for p in primes_up_to(200):
        assert mass_superspecial(1, p).value == Fraction(p - 1, 24)
        # -1 * zeta(-1) * (p - 1) / 2
        assert mass_superspecial(1, p).value == -1 * Fraction(-1, 12) * (p - 1) / 2


def test_g2_closed_forms():
    assert mass_superspecial(2, 2).value == Fraction(5, 5760)
    assert mass_superspecial_fkernel(2, 2).value == Fraction(3, 5760) == Fraction(1, 1920)
    for p in primes_up_to(100):
        assert mass_superspecial(2, p).value == Fraction((p - 1) * (p * p + 1), 5760)
        assert mass_superspecial_fkernel(2, p).value == Fraction(p * p - 1, 5760)


def test_g3_value():
    # (-1)^6 / 8 * zeta(-1) zeta(-3) zeta(-5) * (p-1)(p^2+1)(p^3-1)
    p = 3
    expected = Fraction(1, 8) * Fraction(-1, 12) * Fraction(1, 120) * Fraction(-1, 252) * 2 * 10 * 26
    assert mass_superspecial(3, p).value == expected


def test_mass_argument_errors():
    with pytest.raises(ValueError):
        mass_superspecial_fkernel(3, 2)
    with pytest.raises(ValueError):
        mass_superspecial(2, 4)
    with pytest.raises(ValueError):
        mass_superspecial(0, 2)


def test_mass_lambda_x_examples():
    assert mass_lambda_x(3, Case.I).value == Fraction(20, 5760) == Fraction(1, 288)
    assert mass_lambda_x(2, Case.III).value == Fraction(3 * 60, 5760) == Fraction(1, 32)
    for p in primes_up_to(60):
        star = mass_superspecial_fkernel(2, p).value
        assert mass_lambda_x(p, Case.II).value == star * (p ** 4 - p ** 2)
        assert mass_lambda_x(p, Case.III).value == star * psl2_order(p)
        for case in Case:
            assert mass_lambda_x(p, case).value == Fraction(l_p(p, case), 5760)


def test_mass_lambda_x_accepts_classes():
    xc = classify(generic_point(2, 2))
    assert mass_lambda_x(2, xc).value == mass_lambda_x(2, Case.II).value
    assert mass_lambda_x(3, XiClass.symbolic(3, 5)).value == mass_lambda_x(3, Case.III).value


def test_relative_index():
    for p in (2, 3, 5, 7):
        assert relative_index(Case.II, Case.II, p) == 1
        assert relative_index(FKERNEL, Case.II, p) == p ** 4 - p ** 2
        assert relative_index(FKERNEL, Case.III, p) == psl2_order(p)
        assert index_in_fkernel_group(p, Case.III) == psl2_order(p)


def test_sp_group_order():
    assert sp_group_order(1, 3) == 24
    assert sp_group_order(1, 4) == 48
    assert sp_group_order(2, 3) == 51840 == 81 * 8 * 80
    for N in range(2, 7):
        assert sp_group_order(1, N) == sp_group_order_bruteforce(1, N)
    assert sp_group_order(2, 12) == sp_group_order(2, 3) * sp_group_order(2, 4)


@pytest.mark.slow
def test_sp4_mod2_bruteforce():
    assert sp_group_order_bruteforce(2, 2) == sp_group_order(2, 2) == 720


def test_hecke_orbits():
    assert hecke_orbit_size(2, 3, Case.I) == 45
    assert hecke_orbit_size(3, 4, Case.I) == sp_group_order(2, 4) * Fraction(20, 5760)
    with pytest.raises(ValueError):
        hecke_orbit_size(3, 3, Case.I)
    with pytest.raises(ValueError):
        hecke_orbit_size(5, 2, Case.I)


def test_hecke_non_integral_is_reported(monkeypatch):
    import ssmass.mass as mass_mod

    monkeypatch.setattr(mass_mod, "sp_group_order", lambda g, N: 1)
    with pytest.raises(IntegralityError):
        hecke_orbit_size(2, 3, Case.I)


def test_mobius_and_divisors():
    assert [mobius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
    assert divisors(12) == [1, 2, 3, 4, 6, 12]


def test_census_p2():
    rows = census(2, 6)
    counts = {r.degree: r.count for r in rows}
    assert counts[1] == 5 and counts[2] == 12 and counts[3] == 60
    assert counts[2] == 2 ** 4 - 2 ** 2 and counts[3] == 2 ** 6 - 2 ** 2
    assert sum(counts.values()) == 2 ** 12 + 1


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_census_matches_enumeration(p, m):
    assert {r.degree: r.count for r in census(p, m)} == census_bruteforce(p, m)


def test_census_with_level():
    rows = census(2, 3, 3)
    assert [(r.degree, r.count, r.orbit_size) for r in rows] == [(1, 5, 45), (3, 60, 1620)]


def test_stratum_count_d1():
    assert stratum_count(5, 1) == 26

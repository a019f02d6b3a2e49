from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ssmass._tower import is_prime
from ssmass.exact_arith import Rational, bernoulli, bernoulli_akiyama_tanigawa, zeta_negative


def test_bernoulli_small_values():
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(4) == Fraction(-1, 30)
    assert bernoulli(6) == Fraction(1, 42)
    assert bernoulli(12) == Fraction(-691, 2730)


def test_odd_bernoulli_vanish():
    assert all(bernoulli(n) == 0 for n in range(3, 41, 2))


def test_recurrence_matches_akiyama_tanigawa():
    for n in range(0, 61):
        assert bernoulli(n) == bernoulli_akiyama_tanigawa(n), n


@given(st.integers(min_value=1, max_value=40))
def test_von_staudt_clausen(k):
    # B_{2k} + sum of 1/q over primes q with (q - 1) | 2k is an integer
    s = bernoulli(2 * k) + sum(Fraction(1, q) for q in range(2, 2 * k + 2) if is_prime(q) and (2 * k) % (q - 1) == 0)
    assert s.denominator == 1


def test_zeta_negative_values():
    assert zeta_negative(1) == Fraction(-1, 12)
    assert zeta_negative(2) == Fraction(1, 120)
    assert zeta_negative(3) == Fraction(-1, 252)
    assert zeta_negative(4) == Fraction(1, 240)


@given(st.integers(min_value=1, max_value=30))
def test_zeta_negative_signs_alternate(k):
    z = zeta_negative(k)
    assert isinstance(z, Rational)
    assert (z < 0) == (k % 2 == 1)


def test_bad_arguments():
    with pytest.raises(ValueError):
        bernoulli(-1)
    with pytest.raises(ValueError):
        zeta_negative(0)

"""Exact rationals, Bernoulli numbers and zeta values at negative odd integers."""
from __future__ import annotations

from fractions import Fraction
from math import comb

Rational = Fraction

_BERNOULLI: list[Fraction] = [Fraction(1)]


def bernoulli(n: int) -> Fraction:
    """Return B_n with the convention B_1 = -1/2.

    Uses sum_{j=0}^{n} C(n+1, j) B_j = 0, memoized across calls.

    >>> bernoulli(6)
    Fraction(1, 42)
    """
    if n < 0:
        raise ValueError(f"bernoulli index must be nonnegative, got {n}")
    if n >= 3 and n % 2 == 1:
        return Fraction(0)
    while len(_BERNOULLI) <= n:
        k = len(_BERNOULLI)
        if k >= 3 and k % 2 == 1:
            _BERNOULLI.append(Fraction(0))
            continue
        s = sum(comb(k + 1, j) * _BERNOULLI[j] for j in range(k))
        _BERNOULLI.append(-s / (k + 1))
    return _BERNOULLI[n]


def bernoulli_akiyama_tanigawa(n: int) -> Fraction:
    """Independent route to B_n via the Akiyama-Tanigawa table.

    The table naturally yields B_1 = +1/2; the sign is flipped to match
    :func:`bernoulli`.
    """
    if n < 0:
        raise ValueError(f"bernoulli index must be nonnegative, got {n}")
    a: list[Fraction] = []
    for m in range(n + 1):
        a.append(Fraction(1, m + 1))
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    value = a[0]
    return -value if n == 1 else value


def zeta_negative(k: int) -> Fraction:
    """zeta(1 - 2k) = -B_{2k} / (2k) for k >= 1."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    return -bernoulli(2 * k) / (2 * k)

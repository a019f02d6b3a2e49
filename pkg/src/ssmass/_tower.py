"""Coefficient-level arithmetic shared by the finite-field and p-adic towers.

Both towers are R[x]/(x^2 + f1*x + f0) [y]/(g(y)) with R = Z/mod.  A "pair"
is an element a0 + a1*x of the quadratic layer; a "flat" vector lists the
coordinates in the basis x^i y^j at index 2j + i.
"""
from __future__ import annotations

from typing import Sequence

Pair = tuple[int, int]


def pmul(a: Pair, b: Pair, f: Pair, mod: int) -> Pair:
    c2 = a[1] * b[1]
    return ((a[0] * b[0] - c2 * f[0]) % mod,
            (a[0] * b[1] + a[1] * b[0] - c2 * f[1]) % mod)


def padd(a: Pair, b: Pair, mod: int) -> Pair:
    return ((a[0] + b[0]) % mod, (a[1] + b[1]) % mod)


def psub(a: Pair, b: Pair, mod: int) -> Pair:
    return ((a[0] - b[0]) % mod, (a[1] - b[1]) % mod)


def psigma(a: Pair, sx: Pair, mod: int) -> Pair:
    """Apply x -> sx to a0 + a1*x."""
    return ((a[0] + a[1] * sx[0]) % mod, (a[1] * sx[1]) % mod)


def to_pairs(flat: Sequence[int]) -> list[Pair]:
    return [(flat[2 * j], flat[2 * j + 1]) for j in range(len(flat) // 2)]


def to_flat(pairs: Sequence[Pair]) -> tuple[int, ...]:
    out: list[int] = []
    for c in pairs:
        out.extend(c)
    return tuple(out)


def ymul(A: Sequence[Pair], B: Sequence[Pair], f: Pair, g: Sequence[Pair],
         mod: int) -> list[Pair]:
    """Product of two polynomials in y (m pairs each) reduced modulo monic g."""
    m = len(g)
    prod = [(0, 0)] * (2 * m - 1)
    for i, a in enumerate(A):
        if a == (0, 0):
            continue
        for j, b in enumerate(B):
            if b == (0, 0):
                continue
            prod[i + j] = padd(prod[i + j], pmul(a, b, f, mod), mod)
    for k in range(2 * m - 2, m - 1, -1):
        c = prod[k]
        if c == (0, 0):
            continue
        for j in range(m):
            prod[k - m + j] = psub(prod[k - m + j], pmul(c, g[j], f, mod), mod)
    return prod[:m]


def flat_mul(a: Sequence[int], b: Sequence[int], f: Pair, g: Sequence[Pair],
             mod: int) -> tuple[int, ...]:
    if len(g) == 1:
        return pmul((a[0], a[1]), (b[0], b[1]), f, mod)
    return to_flat(ymul(to_pairs(a), to_pairs(b), f, g, mod))


def vp(n: int, p: int, cap: int) -> int:
    """p-adic valuation of an integer, capped (0 maps to cap)."""
    if n == 0:
        return cap
    v = 0
    while n % p == 0 and v < cap:
        n //= p
        v += 1
    return v


def factor(n: int) -> dict[int, int]:
    """Trial-division factorization; inputs here are small group orders."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True

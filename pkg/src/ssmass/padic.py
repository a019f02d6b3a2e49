"""Truncated unramified p-adic rings with their Frobenius.

``make_unram(p, prec)`` models Z_{p^2}/p^prec = (Z/p^prec)[x]/(f(x)), where f is
the integer lift of the F_{p^2} defining polynomial.  The Frobenius image of
x is obtained by Newton iteration from x^p.

``make_unram_tower(p, m, prec)`` models W(F_{p^{2m}})/p^prec as an extension
of the former by a lift of the degree-m tower polynomial; it is only used by
the lattice computations in :mod:`ssmass.dieudonne`.
"""
from __future__ import annotations

from functools import lru_cache
from math import ceil, log2
from typing import Sequence

from ._tower import Pair, flat_mul, is_prime, padd, pmul, psigma, psub, to_pairs, vp
from .finite_field import FFElem, FieldCtx, _inv2, make_field


class NonUnitError(ArithmeticError):
    """Raised when inverting an element of positive valuation."""


def _newton_steps(prec: int) -> int:
    return ceil(log2(prec)) + 1 if prec > 1 else 1


class UnramCtx:
    def __init__(self, p: int, prec: int):
        self.p = p
        self.prec = prec
        self.modulus = p ** prec
        self.field = make_field(p, 1)
        self.f = self.field.f2
        self.sigma_x = self._lift_frobenius()

    def __repr__(self) -> str:
        return f"UnramCtx(p={self.p}, prec={self.prec})"

    def __reduce__(self):
        return (make_unram, (self.p, self.prec))

    def __call__(self, value: int | Sequence[int]) -> UnramElem:
        if isinstance(value, int):
            value = (value, 0)
        a0, a1 = value
        return UnramElem(self, (a0 % self.modulus, a1 % self.modulus))

    @property
    def x(self) -> UnramElem:
        return self((0, 1))

    def lift(self, z: FFElem) -> UnramElem:
        """Canonical lift of an F_{p^2} element: coefficients in [0, p)."""
        z = self.field(z) if z.ctx is not self.field else z
        return self(z.coeffs)

    def _f_at(self, r: Pair) -> Pair:
        mod, f = self.modulus, self.f
        return padd(padd(pmul(r, r, f, mod), ((f[1] * r[0]) % mod, (f[1] * r[1]) % mod), mod),
                    (f[0], 0), mod)

    def _lift_frobenius(self) -> Pair:
        mod, f, p = self.modulus, self.f, self.p
        r: Pair = (0, 1)
        acc: Pair = (1, 0)
        for _ in range(p):
            acc = pmul(acc, r, f, mod)
        r = acc  # x^p, congruent to sigma(x) mod p
        for _ in range(_newton_steps(self.prec)):
            deriv = padd(((2 * r[0]) % mod, (2 * r[1]) % mod), (f[1], 0), mod)
            step = pmul(self._f_at(r), _unit_inverse(deriv, f, p, mod), f, mod)
            r = psub(r, step, mod)
        assert self._f_at(r) == (0, 0), "Frobenius lift did not converge"
        assert (r[0] % p, r[1] % p) != (0, 1), "Frobenius lift picked the wrong root"
        assert psigma(r, r, mod) == (0, 1), "sigma is not an involution"
        return r


def _unit_inverse(a: Pair, f: Pair, p: int, mod: int) -> Pair:
    """Newton inverse of a unit of (Z/mod)[x]/(f), mod a power of p."""
    if a[0] % p == 0 and a[1] % p == 0:
        raise NonUnitError(f"{a} is not a unit")
    u = _inv2((a[0] % p, a[1] % p), f, p)
    steps = _newton_steps(round(log2(mod) / log2(p)) if mod > 1 else 1)
    for _ in range(steps):
        au = pmul(a, u, f, mod)
        u = pmul(u, ((2 - au[0]) % mod, (-au[1]) % mod), f, mod)
    assert pmul(a, u, f, mod) == (1 % mod, 0)
    return u


class UnramElem:
    __slots__ = ("ctx", "c")

    def __init__(self, ctx: UnramCtx, c: Pair):
        self.ctx = ctx
        self.c = c

    def _coerce(self, other) -> Pair | None:
        if isinstance(other, int):
            return (other % self.ctx.modulus, 0)
        if isinstance(other, UnramElem):
            if other.ctx is not self.ctx:
                raise ValueError(f"mixed contexts {self.ctx} and {other.ctx}")
            return other.c
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return UnramElem(self.ctx, padd(self.c, o, self.ctx.modulus))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return UnramElem(self.ctx, psub(self.c, o, self.ctx.modulus))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self) -> UnramElem:
        return UnramElem(self.ctx, psub((0, 0), self.c, self.ctx.modulus))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return UnramElem(self.ctx, pmul(self.c, o, self.ctx.f, self.ctx.modulus))

    __rmul__ = __mul__

    def inverse(self) -> UnramElem:
        return UnramElem(self.ctx, _unit_inverse(self.c, self.ctx.f, self.ctx.p, self.ctx.modulus))

    def sigma(self, n: int = 1) -> UnramElem:
        if n % 2 == 0:
            return self
        return UnramElem(self.ctx, psigma(self.c, self.ctx.sigma_x, self.ctx.modulus))

    def valuation(self) -> int:
        """p-adic valuation, saturating at the precision."""
        p, prec = self.ctx.p, self.ctx.prec
        return min(vp(self.c[0], p, prec), vp(self.c[1], p, prec))

    def is_unit(self) -> bool:
        return self.valuation() == 0

    def reduce(self) -> FFElem:
        """Reduction to the residue field F_{p^2}."""
        p = self.ctx.p
        return self.ctx.field((self.c[0] % p, self.c[1] % p))

    def __eq__(self, other) -> bool:
        try:
            o = self._coerce(other)
        except ValueError:
            return False
        if o is None:
            return NotImplemented
        return self.c == o

    def __hash__(self) -> int:
        return hash((self.ctx.p, self.ctx.prec, self.c))

    def __repr__(self) -> str:
        return f"UnramElem({list(self.c)} mod {self.ctx.p}^{self.ctx.prec})"

    def to_json(self) -> str:
        return f"[{self.c[0]},{self.c[1]}] mod {self.ctx.p}^{self.ctx.prec}"


def make_unram(p: int, prec: int) -> UnramCtx:
    return _make_unram(p, prec)


@lru_cache(maxsize=None)
def _make_unram(p: int, prec: int) -> UnramCtx:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"p must be prime, got {p!r}")
    if prec < 1:
        raise ValueError(f"precision must be positive, got {prec}")
    return UnramCtx(p, prec)


def unram_add(x: UnramElem, y: UnramElem) -> UnramElem:
    return x + y


def unram_mul(x: UnramElem, y: UnramElem) -> UnramElem:
    return x * y


def unram_neg(x: UnramElem) -> UnramElem:
    return -x


def unram_inv(x: UnramElem) -> UnramElem:
    return x.inverse()


def reduce_to_residue(x: UnramElem) -> FFElem:
    return x.reduce()


# ---------------------------------------------------------------------------
# W(F_{p^{2m}}) / p^prec


class TowerCtx:
    """(Z_{p^2}/p^prec)[y]/(g_hat(y)) with g_hat lifting the field tower polynomial."""

    def __init__(self, p: int, m: int, prec: int):
        self.p = p
        self.m = m
        self.prec = prec
        self.modulus = p ** prec
        self.base = make_unram(p, prec)
        self.field: FieldCtx = make_field(p, m)
        self.f = self.base.f
        self.g = self.field.g  # coefficients already in [0, p)
        self.degree = 2 * m
        self.sigma_y = self._lift_frobenius()
        self._sigma_y_powers = [self.one.v]
        for _ in range(1, m):
            self._sigma_y_powers.append(self._mul(self._sigma_y_powers[-1], self.sigma_y))

    def __repr__(self) -> str:
        return f"TowerCtx(p={self.p}, m={self.m}, prec={self.prec})"

    def __call__(self, value: int | Sequence[int]) -> TowerElem:
        if isinstance(value, int):
            value = [value]
        v = list(value) + [0] * (self.degree - len(value))
        return TowerElem(self, tuple(c % self.modulus for c in v))

    @property
    def one(self) -> TowerElem:
        return self(1)

    @property
    def zero(self) -> TowerElem:
        return self(0)

    def lift(self, z: FFElem) -> TowerElem:
        """Canonical lift of a field element: F_p digits placed in [0, p)."""
        return self(self.field(z).coeffs)

    def from_unram(self, a: UnramElem) -> TowerElem:
        if a.ctx.p != self.p:
            raise ValueError("characteristic mismatch")
        mod = self.modulus
        return self((a.c[0] % mod, a.c[1] % mod))

    def _mul(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        return flat_mul(a, b, self.f, self.g, self.modulus)

    def _sigma_coeffs(self, v: tuple[int, ...]) -> list[Pair]:
        sx = self.base.sigma_x
        return [psigma(c, sx, self.modulus) for c in to_pairs(v)]

    def _lift_frobenius(self) -> tuple[int, ...]:
        if self.m == 1:
            return (0, 0)
        mod = self.modulus
        g_full = [tuple(c) for c in self.g] + [(1, 0)]
        g_sig = [psigma(c, self.base.sigma_x, mod) for c in g_full]

        def evaluate(poly: list[Pair], r: tuple[int, ...]) -> tuple[int, ...]:
            acc = (0,) * self.degree
            for c in reversed(poly):
                acc = self._mul(acc, r)
                acc = tuple((u + v) % mod for u, v in zip(acc, (c[0], c[1]) + (0,) * (self.degree - 2)))
            return acc

        deriv = [((k * c[0]) % mod, (k * c[1]) % mod) for k, c in enumerate(g_sig)][1:]
        y = self((0, 0, 1)).v
        r = self.one.v
        for _ in range(self.p):
            r = self._mul(r, y)
        for _ in range(_newton_steps(self.prec)):
            num = evaluate(g_sig, r)
            den = TowerElem(self, evaluate(deriv, r)).inverse().v
            r = tuple((u - v) % mod for u, v in zip(r, self._mul(num, den)))
        assert not any(evaluate(g_sig, r)), "tower Frobenius lift did not converge"
        return r


class TowerElem:
    __slots__ = ("ctx", "v")

    def __init__(self, ctx: TowerCtx, v: tuple[int, ...]):
        self.ctx = ctx
        self.v = v

    def _o(self, other) -> tuple[int, ...] | None:
        if isinstance(other, int):
            return self.ctx(other).v
        if isinstance(other, TowerElem):
            if other.ctx is not self.ctx:
                raise ValueError("mixed tower contexts")
            return other.v
        return None

    def __add__(self, other):
        o = self._o(other)
        if o is None:
            return NotImplemented
        mod = self.ctx.modulus
        return TowerElem(self.ctx, tuple((a + b) % mod for a, b in zip(self.v, o)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._o(other)
        if o is None:
            return NotImplemented
        mod = self.ctx.modulus
        return TowerElem(self.ctx, tuple((a - b) % mod for a, b in zip(self.v, o)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self) -> TowerElem:
        mod = self.ctx.modulus
        return TowerElem(self.ctx, tuple((-a) % mod for a in self.v))

    def __mul__(self, other):
        o = self._o(other)
        if o is None:
            return NotImplemented
        return TowerElem(self.ctx, self.ctx._mul(self.v, o))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        o = self._o(other)
        if o is None:
            return NotImplemented
        return self.v == o

    def __hash__(self) -> int:
        return hash(self.v)

    def __repr__(self) -> str:
        return f"TowerElem({list(self.v)})"

    def sigma(self) -> TowerElem:
        ctx = self.ctx
        mod = ctx.modulus
        acc = (0,) * ctx.degree
        for c, ypow in zip(ctx._sigma_coeffs(self.v), ctx._sigma_y_powers):
            term = ctx._mul((c[0], c[1]) + (0,) * (ctx.degree - 2), ypow)
            acc = tuple((a + b) % mod for a, b in zip(acc, term))
        return TowerElem(ctx, acc)

    def sigma_inv(self) -> TowerElem:
        z = self
        for _ in range(self.ctx.degree - 1):
            z = z.sigma()
        return z

    def valuation(self) -> int:
        p, prec = self.ctx.p, self.ctx.prec
        return min(vp(c, p, prec) for c in self.v)

    def reduce(self) -> FFElem:
        p = self.ctx.p
        return self.ctx.field(tuple(c % p for c in self.v))

    def inverse(self) -> TowerElem:
        if self.valuation() > 0:
            raise NonUnitError(f"{self} is not a unit")
        u = self.ctx.lift(self.reduce().inverse())
        for _ in range(_newton_steps(self.ctx.prec)):
            u = u * (2 - self * u)
        assert self * u == 1
        return u

    def div_p_power(self, k: int) -> TowerElem:
        """self / p^k for self of valuation >= k (top digits become 0)."""
        pk = self.ctx.p ** k
        assert all(c % pk == 0 for c in self.v)
        return TowerElem(self.ctx, tuple(c // pk for c in self.v))


def make_unram_tower(p: int, m: int, prec: int) -> TowerCtx:
    return _make_unram_tower(p, m, prec)


@lru_cache(maxsize=None)
def _make_unram_tower(p: int, m: int, prec: int) -> TowerCtx:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"p must be prime, got {p!r}")
    return TowerCtx(p, m, prec)

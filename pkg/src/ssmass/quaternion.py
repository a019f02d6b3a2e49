"""The maximal order O_D = Z_{p^2}[Pi], Pi^2 = -p, Pi a = a^sigma Pi, modulo Pi^N.

An element a + b*Pi keeps a modulo p^ceil(N/2) and b modulo p^floor(N/2); those
are exactly the digits visible below Pi^N, so equality and valuation are exact.
Matrices over O_D multiply with ``@``.
"""
from __future__ import annotations

from functools import lru_cache
from math import ceil
from typing import Iterable, Sequence

from ._tower import Pair, padd, pmul, psigma, psub, vp
from .finite_field import FFElem
from .padic import UnramCtx, UnramElem, make_unram


class QuatCtx:
    def __init__(self, p: int, N: int):
        self.p = p
        self.N = N
        self.unram: UnramCtx = make_unram(p, max(1, ceil(N / 2)))
        self.a_mod = p ** ceil(N / 2)
        self.b_mod = p ** (N // 2)
        self.f = self.unram.f
        self.sigma_x = self.unram.sigma_x
        self.field = self.unram.field

    def __repr__(self) -> str:
        return f"QuatCtx(p={self.p}, N={self.N})"

    def __reduce__(self):
        return (make_quat, (self.p, self.N))

    def __call__(self, a: int | Sequence[int] | UnramElem = 0,
                 b: int | Sequence[int] | UnramElem = 0) -> QuatElem:
        return QuatElem(self, self._pair(a, self.a_mod), self._pair(b, self.b_mod))

    @staticmethod
    def _pair(v, mod: int) -> Pair:
        if isinstance(v, UnramElem):
            v = v.c
        elif isinstance(v, FFElem):
            v = v.coeffs[:2]
        elif isinstance(v, int):
            v = (v, 0)
        return (v[0] % mod, v[1] % mod)

    @property
    def zero(self) -> QuatElem:
        return self(0)

    @property
    def one(self) -> QuatElem:
        return self(1)

    @property
    def pi(self) -> QuatElem:
        return self(0, 1)

    def pi_power(self, k: int) -> QuatElem:
        """Pi^k = (-p)^(k//2) * Pi^(k%2)."""
        c = (-self.p) ** (k // 2)
        return self(c, 0) if k % 2 == 0 else self(0, c)

    def lift(self, z: FFElem, balanced: bool = False) -> QuatElem:
        """Lift a residue with zero Pi-coordinate and digits in [0, p), or in
        (-p/2, p/2] when ``balanced``."""
        c0, c1 = z.to_fp2().coeffs if z.ctx.m > 1 else z.coeffs
        if balanced:
            half = self.p // 2
            c0 = c0 - self.p if c0 > half else c0
            c1 = c1 - self.p if c1 > half else c1
        return self((c0, c1))


class QuatElem:
    __slots__ = ("ctx", "a", "b")

    def __init__(self, ctx: QuatCtx, a: Pair, b: Pair):
        self.ctx = ctx
        self.a = a
        self.b = b

    def _o(self, other) -> QuatElem | None:
        if isinstance(other, int):
            return self.ctx(other)
        if isinstance(other, QuatElem):
            if other.ctx is not self.ctx:
                raise ValueError(f"mixed contexts {self.ctx} and {other.ctx}")
            return other
        return None

    def __add__(self, other):
        o = self._o(other)
        if o is None:
            return NotImplemented
        c = self.ctx
        return QuatElem(c, padd(self.a, o.a, c.a_mod), padd(self.b, o.b, c.b_mod))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._o(other)
        if o is None:
            return NotImplemented
        c = self.ctx
        return QuatElem(c, psub(self.a, o.a, c.a_mod), psub(self.b, o.b, c.b_mod))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self) -> QuatElem:
        c = self.ctx
        return QuatElem(c, psub((0, 0), self.a, c.a_mod), psub((0, 0), self.b, c.b_mod))

    def __mul__(self, other):
        o = self._o(other)
        if o is None:
            return NotImplemented
        return self._mul(o)

    def __rmul__(self, other):
        o = self._o(other)
        if o is None:
            return NotImplemented
        return o._mul(self)

    def _mul(self, o: QuatElem) -> QuatElem:
        # (a + b Pi)(c + d Pi) = (ac - p b d^s) + (ad + b c^s) Pi
        ctx = self.ctx
        f, sx, am, bm = ctx.f, ctx.sigma_x, ctx.a_mod, ctx.b_mod
        a, b, c, d = self.a, self.b, o.a, o.b
        bd = pmul(b, psigma(d, sx, am), f, am)
        new_a = psub(pmul(a, c, f, am), (ctx.p * bd[0], ctx.p * bd[1]), am)
        if bm == 1:
            return QuatElem(ctx, new_a, (0, 0))
        new_b = padd(pmul(a, d, f, bm), pmul(b, psigma(c, sx, bm), f, bm), bm)
        return QuatElem(ctx, new_a, new_b)

    def star(self) -> QuatElem:
        """Canonical involution a^sigma - b Pi."""
        c = self.ctx
        return QuatElem(c, psigma(self.a, c.sigma_x, c.a_mod), psub((0, 0), self.b, c.b_mod))

    def twist(self, n: int = 1) -> QuatElem:
        """Pi^n x Pi^-n; only the parity of n matters."""
        if n % 2 == 0:
            return self
        c = self.ctx
        return QuatElem(c, psigma(self.a, c.sigma_x, c.a_mod), psigma(self.b, c.sigma_x, c.b_mod))

    def valuation(self) -> int:
        """Pi-adic valuation, saturating at N."""
        p, N = self.ctx.p, self.ctx.N
        va = min(vp(self.a[0], p, N), vp(self.a[1], p, N))
        vb = min(vp(self.b[0], p, N), vp(self.b[1], p, N))
        return min(2 * va, 2 * vb + 1, N)

    def reduce(self) -> FFElem:
        """Residue mod Pi in F_{p^2}."""
        p = self.ctx.p
        return self.ctx.field((self.a[0] % p, self.a[1] % p))

    def leading_residue(self, k: int) -> FFElem:
        """Residue of c in x = c Pi^k + O(Pi^(k+1)), for x of valuation >= k."""
        p = self.ctx.p
        if k >= self.ctx.N:
            raise ValueError("coefficient lies beyond the precision")
        part = self.a if k % 2 == 0 else self.b
        scale = p ** (k // 2)
        assert part[0] % scale == 0 and part[1] % scale == 0, "valuation below k"
        sign = -1 if (k // 2) % 2 else 1
        return self.ctx.field(((sign * (part[0] // scale)) % p, (sign * (part[1] // scale)) % p))

    def truncate(self, N: int) -> QuatElem:
        """Image modulo Pi^N for N at most the current precision."""
        if N > self.ctx.N:
            raise ValueError("cannot raise precision")
        return make_quat(self.ctx.p, N)(self.a, self.b)

    def is_zero(self) -> bool:
        return self.a == (0, 0) and self.b == (0, 0)

    def __eq__(self, other) -> bool:
        try:
            o = self._o(other)
        except ValueError:
            return False
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self) -> int:
        return hash((self.ctx.p, self.ctx.N, self.a, self.b))

    def __repr__(self) -> str:
        return f"QuatElem({list(self.a)} + {list(self.b)}*Pi)"

    def to_json(self) -> list[list[int]]:
        return [list(self.a), list(self.b)]


def make_quat(p: int, N: int) -> QuatCtx:
    return _make_quat(p, N)


@lru_cache(maxsize=None)
def _make_quat(p: int, N: int) -> QuatCtx:
    if N < 1:
        raise ValueError(f"Pi-precision must be positive, got {N}")
    make_unram(p, 1)  # validates p
    return QuatCtx(p, N)


class QuatMat:
    """Square matrix over O_D / Pi^N."""

    __slots__ = ("ctx", "rows")

    def __init__(self, ctx: QuatCtx, rows: Iterable[Iterable[QuatElem | int]]):
        self.ctx = ctx
        self.rows = tuple(tuple(ctx(e) if isinstance(e, int) else e for e in r) for r in rows)
        n = len(self.rows)
        for r in self.rows:
            if len(r) != n:
                raise ValueError("QuatMat must be square")
            for e in r:
                if e.ctx is not ctx:
                    raise ValueError("all entries must share one context")

    @classmethod
    def identity(cls, ctx: QuatCtx, n: int = 2) -> QuatMat:
        return cls(ctx, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def w(cls, ctx: QuatCtx) -> QuatMat:
        return cls(ctx, [[0, -1], [1, 0]])

    @classmethod
    def lift(cls, ctx: QuatCtx, residue: Sequence[Sequence[FFElem]], balanced: bool = False) -> QuatMat:
        return cls(ctx, [[ctx.lift(z, balanced) for z in r] for r in residue])

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> QuatElem:
        return self.rows[ij[0]][ij[1]]

    def __add__(self, other: QuatMat) -> QuatMat:
        return QuatMat(self.ctx, [[x + y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: QuatMat) -> QuatMat:
        return QuatMat(self.ctx, [[x - y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> QuatMat:
        return QuatMat(self.ctx, [[-x for x in r] for r in self.rows])

    def __matmul__(self, other: QuatMat) -> QuatMat:
        n = self.n
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = self.ctx.zero
                for x, y in zip(r, c):
                    acc = acc + x._mul(y)
                row.append(acc)
            out.append(row)
        assert len(out) == n
        return QuatMat(self.ctx, out)

    def scale_right(self, z: QuatElem) -> QuatMat:
        """Entrywise x -> x z (right multiplication by a scalar of O_D)."""
        return QuatMat(self.ctx, [[x._mul(z) for x in r] for r in self.rows])

    def star(self) -> QuatMat:
        """Conjugate transpose."""
        return QuatMat(self.ctx, [[self.rows[j][i].star() for j in range(self.n)] for i in range(self.n)])

    def twist(self, n: int = 1) -> QuatMat:
        return QuatMat(self.ctx, [[x.twist(n) for x in r] for r in self.rows])

    def valuation(self) -> int:
        return min(x.valuation() for r in self.rows for x in r)

    def reduce(self) -> list[list[FFElem]]:
        return [[x.reduce() for x in r] for r in self.rows]

    def truncate(self, N: int) -> QuatMat:
        ctx = make_quat(self.ctx.p, N)
        return QuatMat(ctx, [[x.truncate(N) for x in r] for r in self.rows])

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuatMat):
            return NotImplemented
        return self.ctx is other.ctx and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"QuatMat({[list(r) for r in self.rows]})"

    def to_json(self) -> dict:
        return {"p": self.ctx.p, "N": self.ctx.N,
                "entries": [[x.to_json() for x in r] for r in self.rows]}


def quat_mul(x: QuatElem, y: QuatElem) -> QuatElem:
    return x * y


def quat_star(x: QuatElem) -> QuatElem:
    return x.star()


def mat_star(T: QuatMat) -> QuatMat:
    return T.star()


def twist(T: QuatMat, n: int) -> QuatMat:
    return T.twist(n)


def hermitian_defect(T: QuatMat) -> QuatMat:
    """(T^*)^(1) w T - w; T is hermitian to precision N iff this vanishes.

    Pi^-1 T^* Pi equals (T^*)^(1) because sigma is an involution.
    """
    w = QuatMat.w(T.ctx)
    return T.star().twist(1) @ w @ T - w


def embed_into_mat2(x: QuatElem) -> list[list[UnramElem]]:
    """Matrix of left multiplication by x on O_D = Z_{p^2} + Pi Z_{p^2}.

    With coordinates taken on the right (y = u + Pi v), x = a + b Pi acts by
    (a, -p b; b^sigma, a^sigma).  Entries are returned at p-precision
    ceil(N/2); the lower-left entry is only meaningful mod p^floor(N/2).
    """
    u = x.ctx.unram
    a = u(x.a)
    b = u(x.b)
    return [[a, -(b * x.ctx.p)], [b.sigma(), a.sigma()]]

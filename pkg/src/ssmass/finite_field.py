"""The tower F_p ⊂ F_{p^2} ⊂ F_{p^{2m}}.

F_{p^2} = F_p[x]/(x^2 + f1 x + f0) and F_{p^{2m}} = F_{p^2}[y]/(g(y)), both
defining polynomials being the lexicographically smallest monic irreducible
ones (coefficients ordered 0..p-1, constant term compared first).  Contexts
are cached, so ``make_field(p, m) is make_field(p, m)``.

An element stores its coordinates over F_p in the basis x^i y^j at index
2j + i.  Elements of F_{p^2} always live in the base context ``make_field(p, 1)``;
mixing a base element with an element of ``make_field(p, m)`` embeds it along
the tower.  Any other mixture of contexts raises ``ValueError``.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

from ._tower import Pair, factor, flat_mul, is_prime, padd, pmul, psub, to_flat, to_pairs

# ---------------------------------------------------------------------------
# polynomials over F_{p^2}, coefficient lists of pairs, low degree first


def _inv2(a: Pair, f: Pair, p: int) -> Pair:
    if a == (0, 0):
        raise ZeroDivisionError("inverse of zero in F_{p^2}")
    conj = ((a[0] - a[1] * f[1]) % p, (-a[1]) % p)
    norm = pmul(a, conj, f, p)[0]
    t = pow(norm, -1, p)
    return (conj[0] * t % p, conj[1] * t % p)


def _trim(u: list[Pair]) -> list[Pair]:
    while u and u[-1] == (0, 0):
        u.pop()
    return u


def _pmod(u: list[Pair], v: list[Pair], f: Pair, p: int) -> list[Pair]:
    u = _trim(list(u))
    lead_inv = _inv2(v[-1], f, p)
    dv = len(v) - 1
    while len(u) - 1 >= dv and u:
        c = pmul(u[-1], lead_inv, f, p)
        shift = len(u) - 1 - dv
        for j in range(dv + 1):
            u[shift + j] = psub(u[shift + j], pmul(c, v[j], f, p), p)
        _trim(u)
    return u


def _pgcd(u: list[Pair], v: list[Pair], f: Pair, p: int) -> list[Pair]:
    u, v = _trim(list(u)), _trim(list(v))
    while v:
        u, v = v, _pmod(u, v, f, p)
    return u


def _pmulmod(u: list[Pair], v: list[Pair], g: list[Pair], f: Pair, p: int) -> list[Pair]:
    prod = [(0, 0)] * max(len(u) + len(v) - 1, 1)
    for i, a in enumerate(u):
        for j, b in enumerate(v):
            prod[i + j] = padd(prod[i + j], pmul(a, b, f, p), p)
    return _pmod(prod, g, f, p)


def _ppowmod(u: list[Pair], e: int, g: list[Pair], f: Pair, p: int) -> list[Pair]:
    result: list[Pair] = [(1, 0)]
    base = _pmod(u, g, f, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, g, f, p)
        e >>= 1
        if e:
            base = _pmulmod(base, base, g, f, p)
    return result


def _irreducible_over_fp2(g: list[Pair], f: Pair, p: int) -> bool:
    """Monic g of degree m has no factor of degree <= m/2 over F_{p^2}."""
    m = len(g) - 1
    q = p * p
    y = [(0, 0), (1, 0)]
    h = y
    for _ in range(m // 2):
        h = _ppowmod(h, q, g, f, p)
        diff = list(h) + [(0, 0)] * max(0, 2 - len(h))
        diff[1] = psub(diff[1], (1, 0), p)
        if len(_pgcd(g, diff, f, p)) > 1:
            return False
    return True


def _quadratic_irreducible(c0: int, c1: int, p: int) -> bool:
    return all((t * t + c1 * t + c0) % p for t in range(p))


# ---------------------------------------------------------------------------


class FieldCtx:
    """F_{p^{2m}} as a degree-m extension of F_{p^2}."""

    def __init__(self, p: int, m: int, f2: Pair, g: tuple[Pair, ...]):
        self.p = p
        self.m = m
        self.f2 = f2
        self.g = g  # monic; the m lower coefficients, low degree first
        self.q = p * p
        self.order = self.q ** m

    def __repr__(self) -> str:
        return f"FieldCtx(p={self.p}, m={self.m})"

    def __reduce__(self):
        return (make_field, (self.p, self.m))

    @property
    def base(self) -> FieldCtx:
        return make_field(self.p, 1)

    @property
    def degree(self) -> int:
        """Degree over F_p."""
        return 2 * self.m

    def __call__(self, value: int | Sequence[int] | FFElem) -> FFElem:
        if isinstance(value, FFElem):
            if value.ctx is self:
                return value
            if value.ctx is self.base:
                return self.embed(value)
            raise ValueError(f"cannot coerce element of {value.ctx} into {self}")
        if isinstance(value, int):
            coeffs = [value] + [0] * (self.degree - 1)
        else:
            coeffs = list(value) + [0] * (self.degree - len(value))
            if len(coeffs) != self.degree:
                raise ValueError(f"too many coefficients for {self}")
        return FFElem(self, tuple(c % self.p for c in coeffs))

    @property
    def zero(self) -> FFElem:
        return self(0)

    @property
    def one(self) -> FFElem:
        return self(1)

    @property
    def x(self) -> FFElem:
        """Generator of F_{p^2} over F_p."""
        return self.base((0, 1))

    @property
    def y(self) -> FFElem:
        """Generator of F_{p^{2m}} over F_{p^2} (zero when m == 1)."""
        if self.m == 1:
            return self.zero
        return self((0, 0, 1))

    def embed(self, z: FFElem) -> FFElem:
        """The inclusion F_{p^2} -> F_{p^{2m}}."""
        if z.ctx is self:
            return z
        if z.ctx is not self.base:
            raise ValueError(f"{z.ctx} does not embed into {self}")
        return FFElem(self, z.coeffs + (0,) * (self.degree - 2))

    def from_fp2(self, coords: Sequence[FFElem]) -> FFElem:
        """Assemble sum coords[j] * y^j from F_{p^2} coordinates."""
        flat = to_flat([self.base(c).coeffs for c in coords])
        return self(flat)

    def element(self, index: int) -> FFElem:
        """The element whose base-p digits (low first) are its coefficients."""
        coeffs = []
        for _ in range(self.degree):
            index, r = divmod(index, self.p)
            coeffs.append(r)
        return FFElem(self, tuple(coeffs))

    def elements(self) -> Iterator[FFElem]:
        """All elements in the fixed enumeration order (index 0, 1, ...)."""
        for i in range(self.order):
            yield self.element(i)

    def primitive_element(self) -> FFElem:
        """First element in enumeration order generating the unit group."""
        n = self.order - 1
        primes = list(factor(n))
        for i in range(1, self.order):
            z = self.element(i)
            if all(z ** (n // r) != self.one for r in primes):
                return z
        raise AssertionError("unit group has no generator")


class FFElem:
    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: tuple[int, ...]):
        self.ctx = ctx
        self.coeffs = coeffs

    # -- coercion --------------------------------------------------------
    def _other(self, other) -> tuple[FieldCtx, tuple[int, ...], tuple[int, ...]] | None:
        if isinstance(other, int):
            return self.ctx, self.coeffs, self.ctx(other).coeffs
        if not isinstance(other, FFElem):
            return None
        if other.ctx is self.ctx:
            return self.ctx, self.coeffs, other.coeffs
        if other.ctx is self.ctx.base:
            return self.ctx, self.coeffs, self.ctx.embed(other).coeffs
        if self.ctx is other.ctx.base:
            return other.ctx, other.ctx.embed(self).coeffs, other.coeffs
        raise ValueError(f"mixed field contexts {self.ctx} and {other.ctx}")

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        r = self._other(other)
        if r is None:
            return NotImplemented
        ctx, a, b = r
        return FFElem(ctx, tuple((u + v) % ctx.p for u, v in zip(a, b)))

    __radd__ = __add__

    def __sub__(self, other):
        r = self._other(other)
        if r is None:
            return NotImplemented
        ctx, a, b = r
        return FFElem(ctx, tuple((u - v) % ctx.p for u, v in zip(a, b)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self) -> FFElem:
        return FFElem(self.ctx, tuple((-c) % self.ctx.p for c in self.coeffs))

    def __mul__(self, other):
        r = self._other(other)
        if r is None:
            return NotImplemented
        ctx, a, b = r
        return FFElem(ctx, flat_mul(a, b, ctx.f2, ctx.g, ctx.p))

    __rmul__ = __mul__

    def inverse(self) -> FFElem:
        if not self:
            raise ZeroDivisionError("inverse of zero")
        if self.ctx.m == 1:
            return FFElem(self.ctx, _inv2(self.coeffs, self.ctx.f2, self.ctx.p))
        return self ** (self.ctx.order - 2)

    def __truediv__(self, other):
        if isinstance(other, int):
            other = self.ctx(other)
        if not isinstance(other, FFElem):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int) -> FFElem:
        if e < 0:
            return self.inverse() ** (-e)
        result = self.ctx.one
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def frobenius(self) -> FFElem:
        """x -> x^p."""
        if self.ctx.m == 1:
            p, f1 = self.ctx.p, self.ctx.f2[1]
            a0, a1 = self.coeffs
            # sigma(x) is the other root -f1 - x
            return FFElem(self.ctx, ((a0 - a1 * f1) % p, (-a1) % p))
        return self ** self.ctx.p

    # -- structure ---------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.coeffs == self.ctx(other).coeffs
        if not isinstance(other, FFElem):
            return NotImplemented
        if other.ctx is self.ctx:
            return self.coeffs == other.coeffs
        try:
            r = self._other(other)
        except ValueError:
            return False
        return r[1] == r[2]

    def __hash__(self) -> int:
        # elements of F_{p^2} hash alike in every context containing them
        c = self.coeffs
        if not any(c[2:]):
            return hash((self.ctx.p, c[:2]))
        return hash((self.ctx.p, self.ctx.m, c))

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __repr__(self) -> str:
        return f"FFElem({list(self.coeffs)})"

    @property
    def index(self) -> int:
        """Position in the enumeration order of the context."""
        return sum(c * self.ctx.p ** i for i, c in enumerate(self.coeffs))

    def in_fp(self) -> bool:
        return not any(self.coeffs[1:])

    def in_fp2(self) -> bool:
        return not any(self.coeffs[2:])

    def to_fp2(self) -> FFElem:
        """The same element viewed in the base context; must lie in F_{p^2}."""
        if not self.in_fp2():
            raise ValueError(f"{self} is not in F_{{p^2}}")
        return FFElem(self.ctx.base, self.coeffs[:2])

    def fp2_coords(self) -> list[FFElem]:
        """Coordinates over F_{p^2} in the basis 1, y, ..., y^{m-1}."""
        base = self.ctx.base
        return [FFElem(base, c) for c in to_pairs(self.coeffs)]

    def to_json(self) -> list[int]:
        return list(self.coeffs)


def make_field(p: int, m: int = 1) -> FieldCtx:
    """Deterministic tower context for F_{p^{2m}}."""
    return _make_field(p, m)


@lru_cache(maxsize=None)
def _make_field(p: int, m: int) -> FieldCtx:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"p must be prime, got {p!r}")
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"m must be a positive integer, got {m!r}")
    f2 = next((c0, c1) for c0, c1 in product(range(p), repeat=2)
              if _quadratic_irreducible(c0, c1, p))
    if m == 1:
        return FieldCtx(p, 1, f2, ((0, 0),))
    q = p * p
    pair_of = [(i % p, i // p) for i in range(q)]
    for idx in product(range(q), repeat=m):
        g = [pair_of[i] for i in idx]
        if g[0] == (0, 0):
            continue
        if _irreducible_over_fp2(g + [(1, 0)], f2, p):
            ctx = FieldCtx(p, m, f2, tuple(g))
            _check_embedding(ctx)
            return ctx
    raise AssertionError(f"no irreducible polynomial of degree {m} over F_{p}^2")


def _check_embedding(ctx: FieldCtx) -> None:
    x = ctx.x
    ex = ctx.embed(x)
    assert ctx.embed(x * x) == ex * ex
    assert ctx.embed(x + x.frobenius()) == ex + ex.frobenius()
    assert ctx.embed(x.frobenius()) == ex.frobenius()


def frobenius_sigma(z: FFElem) -> FFElem:
    return z.frobenius()


def conjugates_over_fp2(b: FFElem) -> list[FFElem]:
    """The orbit b, b^{q}, b^{q^2}, ... (q = p^2), without repetition."""
    out = [b]
    c = b.frobenius().frobenius()
    while c != b:
        out.append(c)
        c = c.frobenius().frobenius()
    return out


def min_poly_deg_over_fp2(b: FFElem) -> tuple[int, list[FFElem]]:
    """Degree d = [F_{p^2}(b):F_{p^2}] and the monic minimal polynomial.

    Coefficients are returned low degree first, as elements of F_{p^2}.
    """
    conj = conjugates_over_fp2(b)
    ctx = b.ctx
    poly = [ctx.one]
    for c in conj:
        # multiply by (X - c)
        nxt = [ctx.zero] * (len(poly) + 1)
        for i, a in enumerate(poly):
            nxt[i + 1] = nxt[i + 1] + a
            nxt[i] = nxt[i] - a * c
        poly = nxt
    return len(conj), [a.to_fp2() for a in poly]


def degree_over_fp2(b: FFElem) -> int:
    """Smallest e with b^{q^e} = b, by direct powering."""
    q = b.ctx.q
    e, c = 1, b ** q
    while c != b:
        c = c ** q
        e += 1
    return e


def trace_solve(c: FFElem | int, ctx: FieldCtx | None = None) -> FFElem:
    """First y in F_{p^2} (enumeration order) with y + y^p = c, for c in F_p."""
    if isinstance(c, int):
        if ctx is None:
            raise ValueError("an integer right-hand side needs a field context")
        c = ctx.base(c)
    c = c.to_fp2() if c.ctx.m > 1 else c
    if not c.in_fp():
        raise ValueError(f"trace equation needs c in F_p, got {c}")
    for y in c.ctx.elements():
        if y + y.frobenius() == c:
            return y
    raise AssertionError("trace F_{p^2} -> F_p is surjective")


# ---------------------------------------------------------------------------
# linear algebra over a field level of the tower


def row_reduce(rows: Sequence[Sequence[FFElem]]) -> list[list[FFElem]]:
    """Reduced row echelon form (nonzero rows only)."""
    mat = [list(r) for r in rows]
    if not mat:
        return []
    ncols = len(mat[0])
    out: list[list[FFElem]] = []
    col = 0
    while mat and col < ncols:
        piv = next((i for i, r in enumerate(mat) if r[col]), None)
        if piv is None:
            col += 1
            continue
        r = mat.pop(piv)
        inv = r[col].inverse()
        r = [v * inv for v in r]
        mat = [[a - s[col] * b for a, b in zip(s, r)] for s in mat]
        out = [[a - s[col] * b for a, b in zip(s, r)] for s in out]
        out.append(r)
        col += 1
    return out


def rank(rows: Sequence[Sequence[FFElem]]) -> int:
    return len(row_reduce(rows))


def in_span(rows: Sequence[Sequence[FFElem]], target: Sequence[FFElem]) -> bool:
    return rank(list(rows) + [list(target)]) == rank(rows)


def nullspace(rows: Sequence[Sequence[FFElem]], ncols: int, ctx: FieldCtx) -> list[list[FFElem]]:
    """Basis of {t : rows . t = 0}."""
    rref = row_reduce(rows)
    pivots = []
    for r in rref:
        pivots.append(next(j for j, v in enumerate(r) if v))
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for fj in free:
        t = [ctx.zero] * ncols
        t[fj] = ctx.one
        for r, pj in zip(rref, pivots):
            t[pj] = -r[fj]
        basis.append(t)
    return basis

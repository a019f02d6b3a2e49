"""Points xi of P^1 over F_{p^{2m}}, their case split by degree over F_{p^2},
and the reductions mod Pi of the corresponding local endomorphism orders."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import gcd
from typing import Iterator, Sequence

from .finite_field import FFElem, FieldCtx, make_field, min_poly_deg_over_fp2, nullspace, rank

Mat2 = list[list[FFElem]]


class Case(str, enum.Enum):
    I = "I"
    II = "II"
    III = "III"

    @classmethod
    def from_degree(cls, d: int) -> Case:
        if d < 1:
            raise ValueError(f"degree must be positive, got {d}")
        return cls.I if d == 1 else cls.II if d == 2 else cls.III


@dataclass(frozen=True)
class XiPoint:
    """[a : b] normalized to [1 : b/a], or [0 : 1]."""

    a: FFElem
    b: FFElem

    def __post_init__(self):
        a, b = self.a, self.b
        if a.ctx is not b.ctx:
            ctx = a.ctx if a.ctx.m >= b.ctx.m else b.ctx
            a, b = ctx(a), ctx(b)
        if not a and not b:
            raise ValueError("[0:0] is not a point of P^1")
        if a:
            a, b = a.ctx.one, b / a
        else:
            b = b.ctx.one
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def ctx(self) -> FieldCtx:
        return self.a.ctx

    @property
    def p(self) -> int:
        return self.ctx.p

    def is_infinity(self) -> bool:
        return not self.a

    def to_json(self) -> list[list[int]]:
        return [self.a.to_json(), self.b.to_json()]


@dataclass(frozen=True)
class XiClass:
    case: Case
    degree: int
    p: int
    alpha: FFElem | None = None
    beta: FFElem | None = None
    point: XiPoint | None = field(default=None, compare=False)

    @classmethod
    def symbolic(cls, p: int, d: int) -> XiClass:
        """A generic point of exact degree d, without coordinates."""
        make_field(p, 1)
        return cls(Case.from_degree(d), d, p)

    def concrete(self) -> XiClass:
        """Same class backed by explicit coordinates (built on demand)."""
        if self.point is not None:
            return self
        return classify(generic_point(self.p, self.degree))

    def to_json(self) -> dict:
        return {
            "case": self.case.value,
            "degree": self.degree,
            "alpha": self.alpha.to_json() if self.alpha is not None else None,
            "beta": self.beta.to_json() if self.beta is not None else None,
            "b0prime_dim": {Case.I: 4, Case.II: 2, Case.III: 1}[self.case],
            "stabilizer_order": sl2_line_stabilizer_order(self),
        }


@dataclass(frozen=True)
class EndoOrderDesc:
    """B_0' inside M_2(F_{p^2}): the residues mod Pi allowed for End(M)."""

    case: Case
    basis: tuple[tuple[tuple[FFElem, ...], ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, residue: Sequence[Sequence[FFElem]]) -> bool:
        return _in_matrix_span(self.basis, residue)


def _flatten(mat) -> list[FFElem]:
    return [z for r in mat for z in r]


def _in_matrix_span(basis, mat) -> bool:
    rows = [_flatten(b) for b in basis]
    target = [z.to_fp2() if z.ctx.m > 1 else z for z in _flatten(mat)]
    if not rows:
        return not any(target)
    return rank(rows + [target]) == rank(rows)


def classify(xi: XiPoint) -> XiClass:
    if xi.is_infinity():
        return XiClass(Case.I, 1, xi.p, point=xi)
    d, poly = min_poly_deg_over_fp2(xi.b)
    case = Case.from_degree(d)
    if case is Case.II:
        # X^2 - alpha X - beta
        alpha, beta = -poly[1], -poly[0]
        assert xi.b * xi.b == alpha * xi.b + beta
        return XiClass(case, d, xi.p, alpha, beta, point=xi)
    return XiClass(case, d, xi.p, point=xi)


def generic_point(p: int, d: int, ctx: FieldCtx | None = None) -> XiPoint:
    """A deterministic point of exact degree d over F_{p^2}.

    In ``make_field(p, d)`` (the default) this is [1 : y] with y the tower
    generator; in a larger field it is the first element of degree d in
    enumeration order.
    """
    if ctx is None:
        ctx = make_field(p, d)
    if ctx.m % d:
        raise ValueError(f"degree {d} does not divide {ctx.m}")
    if d == 1:
        return XiPoint(ctx.one, ctx.zero)
    if d == ctx.m:
        return XiPoint(ctx.one, ctx.y)
    for z in ctx.elements():
        if min_poly_deg_over_fp2(z)[0] == d:
            return XiPoint(ctx.one, z)
    raise AssertionError("unreachable")


def _matrix_units(ctx: FieldCtx) -> list[tuple[tuple[FFElem, ...], ...]]:
    o, z = ctx.one, ctx.zero
    return [((o, z), (z, z)), ((z, o), (z, z)), ((z, z), (o, z)), ((z, z), (z, o))]


def b0prime(xc: XiClass) -> EndoOrderDesc:
    base = make_field(xc.p, 1)
    o, z = base.one, base.zero
    if xc.case is Case.I:
        return EndoOrderDesc(Case.I, tuple(_matrix_units(base)))
    if xc.case is Case.II:
        if xc.alpha is None:
            return b0prime(xc.concrete())
        companion = ((z, o), (xc.beta, xc.alpha))
        return EndoOrderDesc(Case.II, (((o, z), (z, o)), companion))
    return EndoOrderDesc(Case.III, (((o, z), (z, o)),))


def endo_membership(T, desc: EndoOrderDesc) -> bool:
    """Whether the reduction mod Pi of T (a QuatMat) lies in B_0'."""
    return desc.contains(T.reduce())


def line_stabilizer_algebra(xi: XiPoint) -> EndoOrderDesc:
    """{A in M_2(F_{p^2}) : A (a, b)^t in k (a, b)^t}, solved as a linear system.

    The condition a12 b^2 + (a11 - a22) a b - a21 a^2 = 0 is expanded in the
    F_{p^2}-basis of F_{p^{2m}}.  For xi outside P^1(F_{p^2}) this is B_0'; for
    a rational point it is a Borel subalgebra.
    """
    a, b = xi.a, xi.b
    ctx = xi.ctx
    base = ctx.base
    # unknown order: a11, a12, a21, a22
    coeff = [a * b, b * b, -(a * a), -(a * b)]
    cols = [c.fp2_coords() for c in coeff]
    rows = [[cols[k][j] for k in range(4)] for j in range(ctx.m)]
    basis = nullspace(rows, 4, base)
    mats = tuple(((t[0], t[1]), (t[2], t[3])) for t in basis)
    return EndoOrderDesc(classify(xi).case, mats)


# ---------------------------------------------------------------------------
# SL_2(F_{p^2})


def sl2_order(q: int) -> int:
    return q * (q * q - 1)


def psl2_order(p: int) -> int:
    q = p * p
    return sl2_order(q) // gcd(2, q - 1)


def sl2_elements(ctx: FieldCtx | None = None, p: int | None = None) -> Iterator[Mat2]:
    """Every element of SL_2(F_{p^2}), without scanning all 2x2 matrices."""
    if ctx is None:
        ctx = make_field(p, 1)
    elems = list(ctx.base.elements())
    one = ctx.base.one
    for a in elems:
        if a:
            ainv = a.inverse()
            for b in elems:
                for c in elems:
                    yield [[a, b], [c, (one + b * c) * ainv]]
        else:
            for c in elems:
                if not c:
                    continue
                b = -c.inverse()
                for d in elems:
                    yield [[a, b], [c, d]]


def stabilizes_line(g: Mat2, xi: XiPoint) -> bool:
    a, b = xi.a, xi.b
    u = g[0][0] * a + g[0][1] * b
    v = g[1][0] * a + g[1][1] * b
    return u * b == v * a


def sl2_line_stabilizer_bruteforce(xi: XiPoint) -> int:
    return sum(1 for g in sl2_elements(xi.ctx) if stabilizes_line(g, xi))


def stabilizer_order_for_case(p: int, case: Case) -> int:
    q = p * p
    if case is Case.I:
        return q * (q - 1)
    if case is Case.II:
        return q + 1
    return gcd(2, q - 1)


def sl2_line_stabilizer_order(xi: XiPoint | XiClass) -> int:
    """Closed-form order of the stabilizer in SL_2(F_{p^2}) of the line through xi."""
    xc = xi if isinstance(xi, XiClass) else classify(xi)
    return stabilizer_order_for_case(xc.p, xc.case)


def parse_xi(text: str, p: int, m: int) -> XiPoint:
    """Parse "a0.a1...,b0.b1..." (F_p coordinates, low first) or "generic:d"."""
    text = text.strip()
    ctx = make_field(p, m)
    if text.startswith("generic:"):
        try:
            d = int(text.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"malformed generic point {text!r}") from None
        if d < 1 or m % d:
            raise ValueError(f"degree {d} must divide m={m}")
        return generic_point(p, d, ctx)
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected two coordinates separated by ',', got {text!r}")
    coords = []
    for part in parts:
        try:
            digits = [int(s) for s in part.split(".")]
        except ValueError:
            raise ValueError(f"malformed coordinate {part!r}") from None
        if len(digits) > ctx.degree:
            raise ValueError(f"coordinate {part!r} has more than {ctx.degree} digits")
        coords.append(ctx(digits))
    return XiPoint(coords[0], coords[1])


def projective_line(ctx: FieldCtx) -> Iterator[XiPoint]:
    """All points of P^1(F_{p^{2m}}): [0:1] first, then [1:b] in enumeration order."""
    yield XiPoint(ctx.zero, ctx.one)
    for b in ctx.elements():
        yield XiPoint(ctx.one, b)


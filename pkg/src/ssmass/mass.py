"""Closed-form masses, relative indices, symplectic group orders, Hecke orbit
sizes and the census of P^1 by degree over F_{p^2}."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd, prod

from ._tower import factor, is_prime
from .exact_arith import zeta_negative
from .finite_field import degree_over_fp2, make_field
from .xi import Case, XiClass, psl2_order, sl2_order, stabilizer_order_for_case

FKERNEL = "F-kernel"
"""Baseline for :func:`relative_index`: a point of Lambda*_{2,p}."""


@dataclass(frozen=True)
class MassResult:
    value: Fraction
    provenance: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        assert self.value > 0

    def to_json(self) -> dict:
        return {"value": f"{self.value.numerator}/{self.value.denominator}",
                "provenance": self.provenance, "params": self.params}


def _check_prime(p: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"p must be prime, got {p!r}")


def _zeta_prefactor(g: int) -> Fraction:
    sign = -1 if (g * (g + 1) // 2) % 2 else 1
    z = prod((zeta_negative(k) for k in range(1, g + 1)), start=Fraction(1))
    return sign * z / 2 ** g


def mass_superspecial(g: int, p: int) -> MassResult:
    """M_g: mass of principally polarized superspecial abelian varieties."""
    _check_prime(p)
    if g < 1:
        raise ValueError(f"g must be positive, got {g}")
    local = prod(p ** k + (-1) ** k for k in range(1, g + 1))
    return MassResult(_zeta_prefactor(g) * local, "superspecial", {"g": g, "p": p})


def mass_superspecial_fkernel(g: int, p: int) -> MassResult:
    """M_g^*: polarized superspecial varieties with ker(lambda) = A[F]; g even."""
    _check_prime(p)
    if g < 2 or g % 2:
        raise ValueError(f"g must be a positive even integer, got {g}")
    local = prod(p ** (4 * k - 2) - 1 for k in range(1, g // 2 + 1))
    return MassResult(_zeta_prefactor(g) * local, "superspecial-F-kernel", {"g": g, "p": p})


def index_in_fkernel_group(p: int, case: Case) -> int:
    """[U_{x1} : U_x] = |SL_2(F_{p^2})| / |stabilizer of the line through xi|."""
    return sl2_order(p * p) // stabilizer_order_for_case(p, case)


def _case_of(xc: XiClass | Case | str) -> Case:
    if isinstance(xc, XiClass):
        return xc.case
    return Case(xc)


def mass_lambda_x(p: int, xc: XiClass | Case) -> MassResult:
    """Mass(Lambda_x) = L_p / 5760 for a surface with parameter xi of class xc."""
    _check_prime(p)
    case = _case_of(xc)
    if case is Case.I:
        value = mass_superspecial(2, p).value
    else:
        value = mass_superspecial_fkernel(2, p).value * index_in_fkernel_group(p, case)
    return MassResult(value, f"case {case.value}", {"p": p, "case": case.value})


def l_p(p: int, case: Case) -> int:
    """The closed forms of L_p by case, written out independently."""
    if case is Case.I:
        return (p - 1) * (p * p + 1)
    if case is Case.II:
        return (p * p - 1) * (p ** 4 - p * p)
    return (p * p - 1) * psl2_order(p)


def relative_index(xc1: XiClass | Case | str, xc2: XiClass | Case | str, p: int) -> Fraction:
    """mu(U_1/U_2) = Mass(x2) / Mass(x1); either side may be FKERNEL."""

    def mass(x) -> Fraction:
        if x == FKERNEL:
            return mass_superspecial_fkernel(2, p).value
        return mass_lambda_x(p, x).value

    return mass(xc2) / mass(xc1)


def sp_group_order(g: int, N: int) -> int:
    """|Sp_{2g}(Z/NZ)| via multiplicativity and the prime-power formula."""
    if g < 1 or N < 2:
        raise ValueError(f"need g >= 1 and N >= 2, got g={g}, N={N}")
    total = 1
    for ell, k in factor(N).items():
        local = ell ** ((k - 1) * (2 * g * g + g)) * ell ** (g * g)
        total *= local * prod(ell ** (2 * i) - 1 for i in range(1, g + 1))
    return total


def sp_group_order_bruteforce(g: int, N: int) -> int:
    """Count 2g x 2g matrices over Z/N with M^t J M = J.  Tiny cases only."""
    n = 2 * g
    J = [[0] * n for _ in range(n)]
    for i in range(g):
        J[i][g + i] = 1
        J[g + i][i] = N - 1
    count = 0
    for entries in product(range(N), repeat=n * n):
        M = [entries[i * n:(i + 1) * n] for i in range(n)]
        JM = [[sum(J[i][k] * M[k][j] for k in range(n)) % N for j in range(n)] for i in range(n)]
        ok = all(sum(M[k][i] * JM[k][j] for k in range(n)) % N == J[i][j]
                 for i in range(n) for j in range(n))
        count += ok
    return count


class IntegralityError(AssertionError):
    """A Hecke orbit size came out non-integral."""


def hecke_orbit_size(p: int, N: int, xc: XiClass | Case) -> int:
    """|H_ell(x)| = |Sp_4(Z/NZ)| * Mass(Lambda_x)."""
    _check_prime(p)
    if N < 3 or gcd(N, p) != 1:
        raise ValueError(f"level N must be >= 3 and prime to p, got N={N}, p={p}")
    size = sp_group_order(2, N) * mass_lambda_x(p, xc).value
    if size.denominator != 1 or size <= 0:
        raise IntegralityError(f"orbit size {size} is not a positive integer (p={p}, N={N})")
    return size.numerator


# ---------------------------------------------------------------------------
# census


@dataclass(frozen=True)
class CensusRow:
    degree: int
    count: int
    mass: Fraction
    orbit_size: int | None = None

    def to_json(self) -> dict:
        return {"degree": self.degree, "count": self.count,
                "mass": f"{self.mass.numerator}/{self.mass.denominator}",
                "orbit_size": self.orbit_size}


def mobius(n: int) -> int:
    f = factor(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def stratum_count(p: int, d: int) -> int:
    """Points of P^1 whose field of definition has degree exactly d over F_{p^2}."""
    if d == 1:
        return p * p + 1
    return sum(mobius(d // e) * (p ** (2 * e) + 1) for e in divisors(d))


def census(p: int, m: int, N: int | None = None) -> list[CensusRow]:
    _check_prime(p)
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    rows = []
    for d in divisors(m):
        case = Case.from_degree(d)
        orbit = hecke_orbit_size(p, N, case) if N is not None else None
        rows.append(CensusRow(d, stratum_count(p, d), mass_lambda_x(p, case).value, orbit))
    assert sum(r.count for r in rows) == p ** (2 * m) + 1
    return rows


def census_bruteforce(p: int, m: int) -> dict[int, int]:
    """Degree histogram of P^1(F_{p^{2m}}) by enumeration."""
    ctx = make_field(p, m)
    counts = {1: 1}  # the point at infinity
    for b in ctx.elements():
        d = degree_over_fp2(b)
        counts[d] = counts.get(d, 0) + 1
    return counts

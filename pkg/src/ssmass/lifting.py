"""Lift phi in SL_2(F_{p^2}) to T in M_2(O_D) with (T^*)^(1) w T = w mod Pi^N.

Starting from a lift T_0 of phi, each step reads the first nonzero layer C_n of
the defect X_n - w, solves a linear equation over F_{p^2} for a correction
B_n and sets T_{n+1} = T_n + B_n Pi^(n+1).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .finite_field import FFElem, make_field, trace_solve
from .quaternion import QuatMat, hermitian_defect, make_quat

Mat = list[list[FFElem]]


class PreconditionError(ValueError):
    pass


class LiftObstruction(ArithmeticError):
    """C + Y - Y^t = 0 has no solution: C has a nonzero diagonal entry (p = 2)."""

    def __init__(self, message: str, step: int | None = None, witness: Mat | None = None):
        super().__init__(message)
        self.step = step
        self.witness = witness

    def to_json(self) -> dict:
        return {"step": self.step, "message": str(self),
                "witness": [[z.to_json() for z in r] for r in self.witness] if self.witness else None}


# -- small matrix helpers over F_{p^2} ------------------------------------------


def _t(A: Mat) -> Mat:
    return [list(r) for r in zip(*A)]


def _sig(A: Mat) -> Mat:
    return [[z.frobenius() for z in r] for r in A]


def _neg(A: Mat) -> Mat:
    return [[-z for z in r] for r in A]


def _mm(A: Mat, B: Mat) -> Mat:
    cols = list(zip(*B))
    return [[sum((x * y for x, y in zip(r, c)), r[0] * 0) for c in cols] for r in A]


def _eq(A: Mat, B: Mat) -> bool:
    return all(x == y for r, s in zip(A, B) for x, y in zip(r, s))


def _is_zero(A: Mat) -> bool:
    return not any(z for r in A for z in r)


def _as_fp2(A: Sequence[Sequence[FFElem]]) -> Mat:
    return [[z.to_fp2() if z.ctx.m > 1 else z for z in r] for r in A]


def det2(A: Mat) -> FFElem:
    return A[0][0] * A[1][1] - A[0][1] * A[1][0]


# -- the two linear solvers -----------------------------------------------------


def solve_lemma44_case1(C: Sequence[Sequence[FFElem]]) -> Mat:
    """Y with C + Y + Y^{t(1)} = 0, given C^t = C^(1)."""
    C = _as_fp2(C)
    if not _eq(_t(C), _sig(C)):
        raise PreconditionError("case 1 needs C^t = C^(1)")
    m = len(C)
    zero = C[0][0] * 0
    Y = [[zero] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            Y[i][j] = -C[i][j]
        Y[i][i] = trace_solve(-C[i][i])
    return Y


def solve_lemma44_case2(C: Sequence[Sequence[FFElem]]) -> Mat:
    """Y with C + Y - Y^t = 0, given C^t = -C and a zero diagonal."""
    C = _as_fp2(C)
    if not _eq(_t(C), _neg(C)):
        raise PreconditionError("case 2 needs C^t = -C")
    m = len(C)
    if any(C[i][i] for i in range(m)):
        raise LiftObstruction("C + Y - Y^t = 0 forces a zero diagonal, but C has a nonzero diagonal entry",
                              witness=C)
    zero = C[0][0] * 0
    Y = [[zero] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            Y[i][j] = -C[i][j]
    return Y


def parity_condition_check(C: Sequence[Sequence[FFElem]], n: int) -> bool:
    """C^t = C^(1) for even n, -C^t = C for odd n."""
    C = _as_fp2(C)
    if n % 2 == 0:
        return _eq(_t(C), _sig(C))
    return _eq(_neg(_t(C)), C)


# -- the iteration ----------------------------------------------------------------


@dataclass
class LiftState:
    step: int
    T: QuatMat
    C: Mat
    Y: Mat
    B: Mat


@dataclass
class LiftResult:
    phibar: Mat
    N: int
    T: QuatMat
    defect_valuation: int
    steps: int
    states: list[LiftState] = field(default_factory=list)
    obstructions: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "phibar": [[z.to_json() for z in r] for r in self.phibar],
            "N": self.N,
            "T": self.T.to_json(),
            "defect_valuation": self.defect_valuation,
            "steps": self.steps,
            "obstructions": self.obstructions,
        }


def _retry_candidates(p: int, limit: int = 3) -> list[Mat]:
    """Pi-coordinates tried, in order, for the previous correction after an obstruction."""
    base = make_field(p, 1)
    zero = base.zero
    values = [z for z in base.elements() if z][:limit]
    out = []
    for i in range(2):
        for j in range(2):
            for c in values:
                E = [[zero, zero], [zero, zero]]
                E[i][j] = c
                out.append(E)
    return out


def lift_sl2(phibar: Sequence[Sequence[FFElem]], N: int, *,
             case2_solver: Callable[[Mat], Mat] | None = None) -> LiftResult:
    """Lift phibar in SL_2(F_{p^2}) to T over O_D / Pi^N with defect valuation >= N.

    T_0 lifts phibar digitwise into (-p/2, p/2] with zero Pi-coordinate;
    corrections B_n are lifted into [0, p).  Work is done at precision N + 1.
    """
    phibar = _as_fp2(phibar)
    if len(phibar) != 2 or any(len(r) != 2 for r in phibar):
        raise PreconditionError("phibar must be 2x2")
    if det2(phibar) != 1:
        raise PreconditionError("phibar must have determinant 1")
    if N < 1:
        raise PreconditionError(f"precision must be positive, got {N}")
    solve2 = case2_solver or solve_lemma44_case2
    p = phibar[0][0].ctx.p
    qctx = make_quat(p, N + 1)
    w = QuatMat.w(qctx)
    one = phibar[0][0].ctx.one
    # B = w^-1 (phibar^t)^-1 Y; w^-1 = -w and det(phibar) = 1
    w_inv = [[0 * one, one], [-one, 0 * one]]
    pt_inv = [[phibar[1][1], -phibar[1][0]], [-phibar[0][1], phibar[0][0]]]
    to_B = _mm(w_inv, pt_inv)

    T = QuatMat.lift(qctx, phibar, balanced=True)
    history: list[QuatMat] = [T]
    states: list[LiftState] = []
    obstructions: list[dict] = []

    def advance(T: QuatMat, n: int) -> LiftState:
        X = T.star().twist(1) @ w @ T
        assert X.star() == -X.twist(1), f"X_n^* = -X_n^(1) fails at step {n}"
        D = X - w
        assert D.valuation() >= n + 1, f"defect below Pi^{n + 1} at step {n}"
        C = [[D[i, j].leading_residue(n + 1) for j in range(2)] for i in range(2)]
        assert parity_condition_check(C, n), f"parity condition fails at step {n}"
        try:
            Y = solve_lemma44_case1(C) if n % 2 == 0 else solve2(C)
        except LiftObstruction as exc:
            raise LiftObstruction(str(exc), step=n, witness=C) from None
        B = _mm(to_B, Y)
        T_next = T + QuatMat.lift(qctx, B).scale_right(qctx.pi_power(n + 1))
        return LiftState(n, T_next, C, Y, B)

    n = 0
    while n < N - 1:
        try:
            state = advance(history[n], n)
        except LiftObstruction as exc:
            obstructions.append(exc.to_json())
            state = None
            if n >= 1:
                prev = states[n - 1]
                for E in _retry_candidates(p):
                    shift = QuatMat.lift(qctx, E).scale_right(qctx.pi_power(n + 1))
                    try:
                        state = advance(prev.T + shift, n)
                    except LiftObstruction:
                        continue
                    history[n] = prev.T + shift
                    obstructions[-1]["resolved_by"] = [[z.to_json() for z in r] for r in E]
                    break
            if state is None:
                raise exc
        states.append(state)
        history.append(state.T)
        n += 1

    T_final = history[-1].truncate(N)
    defect = hermitian_defect(T_final).valuation()
    assert defect >= N
    assert _eq(T_final.reduce(), phibar)
    return LiftResult(phibar, N, T_final, defect, len(states), states, obstructions)


def parse_matrix(text: str, p: int) -> Mat:
    """Parse "a,b;c,d" with entries as F_p digit lists "c0.c1" (negatives allowed)."""
    base = make_field(p, 1)
    rows = []
    for row in text.strip().split(";"):
        entries = []
        for part in row.split(","):
            try:
                digits = [int(s) for s in part.strip().split(".")]
            except ValueError:
                raise ValueError(f"malformed matrix entry {part!r}") from None
            if len(digits) > 2:
                raise ValueError(f"entry {part!r} has more than two F_p digits")
            entries.append(base(digits))
        rows.append(entries)
    if len(rows) != 2 or any(len(r) != 2 for r in rows):
        raise ValueError("expected a 2x2 matrix 'a,b;c,d'")
    return rows


def random_sl2(p: int, rng) -> Mat:
    """Uniform element of SL_2(F_{p^2}) by rejection sampling."""
    base = make_field(p, 1)
    while True:
        M = [[base.element(rng.randrange(base.order)) for _ in range(2)] for _ in range(2)]
        if det2(M) == 1:
            return M


def random_admissible_c(p: int, size: int, case: int, rng) -> Mat:
    """Random C satisfying the hypothesis of the case 1 or case 2 solver."""
    base = make_field(p, 1)
    zero = base.zero

    def rand() -> FFElem:
        return base.element(rng.randrange(base.order))

    C = [[zero] * size for _ in range(size)]
    for i in range(size):
        if case == 1:
            C[i][i] = base(rng.randrange(p))  # c = c^(1) means c in F_p
        for j in range(i + 1, size):
            c = rand()
            C[i][j] = c
            C[j][i] = c.frobenius() if case == 1 else -c
    return C


def solver_residual(C: Sequence[Sequence[FFElem]], Y: Mat, case: int) -> Mat:
    """C + Y + Y^{t(1)} for case 1, C + Y - Y^t for case 2."""
    C = _as_fp2(C)
    Yt = _t(Y)
    other = _sig(Yt) if case == 1 else _neg(Yt)
    return [[C[i][j] + Y[i][j] + other[i][j] for j in range(len(C))] for i in range(len(C))]

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from ssmass.finite_field import make_field
from ssmass.lifting import (LiftObstruction, PreconditionError, lift_sl2, parity_condition_check, parse_matrix,
                            random_admissible_c, random_sl2, solve_lemma44_case1, solve_lemma44_case2,
                            solver_residual)
from ssmass.padic import make_unram
from ssmass.quaternion import QuatMat, embed_into_mat2, hermitian_defect


def mat(F, rows):
    return [[F(c) for c in r] for r in rows]


def is_zero(M):
    return not any(z for r in M for z in r)


def symplectic_residual_ok(T: QuatMat) -> bool:
    """Independent check: T acts on Z_{p^2}^4 preserving <e1,e3> = 1, <e2,e4> = p."""
    p, N = T.ctx.p, T.ctx.N
    R = T.ctx.unram
    A = [[R(0)] * 4 for _ in range(4)]
    for i in range(2):
        for j in range(2):
            blk = embed_into_mat2(T[i, j])
            for r in range(2):
                for c in range(2):
                    A[2 * i + r][2 * j + c] = blk[r][c]
    psi = [[0, 0, 1, 0], [0, 0, 0, p], [-1, 0, 0, 0], [0, -p, 0, 0]]
    mod = p ** (N // 2)
    for i in range(4):
        for j in range(4):
            s = R(0)
            for k in range(4):
                for l in range(4):
                    if psi[k][l]:
                        s = s + A[k][i] * A[l][j] * psi[k][l]
            d = (s - R(psi[i][j])).c
            if d[0] % mod or d[1] % mod:
                return False
    return True


def test_solver_examples():
    F = make_field(3)
    Z = mat(F, [[0, 0], [0, 0]])
    assert is_zero(solve_lemma44_case1(Z))
    assert is_zero(solve_lemma44_case2(Z))
    assert solve_lemma44_case1(mat(F, [[1, 0], [0, 0]])) == mat(F, [[1, 0], [0, 0]])
    c = F.x
    C = [[F.zero, c], [-c, F.zero]]
    Y = solve_lemma44_case2(C)
    assert Y == [[F.zero, -c], [F.zero, F.zero]]
    assert is_zero(solver_residual(C, Y, 2))


def test_case2_obstruction_in_char_2():
    F = make_field(2)
    with pytest.raises(LiftObstruction) as info:
        solve_lemma44_case2(mat(F, [[1, 0], [0, 1]]))
    assert info.value.witness is not None


def test_solver_preconditions():
    F = make_field(3)
    with pytest.raises(PreconditionError):
        solve_lemma44_case1(mat(F, [[0, 1], [0, 0]]))
    with pytest.raises(PreconditionError):
        solve_lemma44_case2(mat(F, [[0, 1], [1, 0]]))


@pytest.mark.parametrize("p", [2, 3, 5, 7])
@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10 ** 6), size=st.sampled_from([1, 2, 3, 4]), case=st.sampled_from([1, 2]))
def test_solvers_zero_residual(p, seed, size, case):
    C = random_admissible_c(p, size, case, random.Random(seed))
    assert parity_condition_check(C, 0 if case == 1 else 1)
    Y = (solve_lemma44_case1 if case == 1 else solve_lemma44_case2)(C)
    assert is_zero(solver_residual(C, Y, case))


def test_parity_examples():
    F = make_field(3)
    Z = mat(F, [[0, 0], [0, 0]])
    assert parity_condition_check(Z, 0) and parity_condition_check(Z, 1)
    assert parity_condition_check(mat(F, [[1, 2], [2, 0]]), 2)
    assert parity_condition_check(mat(F, [[0, 1], [-1, 0]]), 3)
    assert not parity_condition_check(mat(F, [[1, 0], [0, 0]]), 1)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_trivial_lifts(p):
    F = make_field(p)
    res = lift_sl2(mat(F, [[1, 0], [0, 1]]), 10)
    assert res.T == QuatMat.identity(res.T.ctx)
    res = lift_sl2(mat(F, [[0, -1], [1, 0]]), 10)
    assert res.T == QuatMat.w(res.T.ctx)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_random_lifts(p):
    rng = random.Random(p)
    for _ in range(25):
        phibar = random_sl2(p, rng)
        res = lift_sl2(phibar, 10)
        assert hermitian_defect(res.T).valuation() >= 10
        assert res.T.reduce() == phibar
        assert res.steps == 9
        assert not res.obstructions
        for st_ in res.states:
            assert parity_condition_check(st_.C, st_.step)
        assert symplectic_residual_ok(res.T)


def test_p3_hundred_lifts_at_precision_10():
    rng = random.Random(3)
    for _ in range(100):
        phibar = random_sl2(3, rng)
        res = lift_sl2(phibar, 10)
        assert res.defect_valuation >= 10 and res.T.reduce() == phibar


def test_symplectic_oracle_rejects_non_lifts():
    F = make_field(3)
    Q = lift_sl2(mat(F, [[1, 0], [0, 1]]), 6).T.ctx
    T = QuatMat(Q, [[Q.one + Q.pi, Q.zero], [Q.zero, Q.one]])
    assert not symplectic_residual_ok(T)


def test_precondition_errors():
    F = make_field(3)
    with pytest.raises(PreconditionError):
        lift_sl2(mat(F, [[1, 1], [1, 1]]), 5)
    with pytest.raises(PreconditionError):
        lift_sl2(mat(F, [[1, 0], [0, 1]]), 0)


def test_obstruction_reported_with_witness():
    def always_obstructed(C):
        raise LiftObstruction("forced", witness=C)

    F = make_field(2)
    with pytest.raises(LiftObstruction) as info:
        lift_sl2(mat(F, [[1, 1], [0, 1]]), 6, case2_solver=always_obstructed)
    assert info.value.step == 1
    assert info.value.to_json()["witness"] is not None


def test_obstruction_retry_recorded():
    calls = {"n": 0}

    def flaky(C):
        calls["n"] += 1
        if calls["n"] == 2:
            raise LiftObstruction("forced once", witness=C)
        return solve_lemma44_case2(C)

    F = make_field(2)
    res = lift_sl2(mat(F, [[1, 1], [0, 1]]), 8, case2_solver=flaky)
    assert res.defect_valuation >= 8
    assert len(res.obstructions) == 1 and "resolved_by" in res.obstructions[0]


def test_parse_matrix():
    F = make_field(3)
    assert parse_matrix("0,-1;1,0", 3) == mat(F, [[0, 2], [1, 0]])
    assert parse_matrix("0.1,0;0,0.2", 3)[0][0] == F.x
    for bad in ("1,0", "1,0;0", "a,0;0,1", "1.1.1,0;0,1"):
        with pytest.raises(ValueError):
            parse_matrix(bad, 3)


def test_lift_json_shape():
    res = lift_sl2(parse_matrix("1,1;0,1", 5), 4)
    js = res.to_json()
    assert js["N"] == 4 and js["defect_valuation"] >= 4 and js["T"]["N"] == 4
    assert make_unram(5, 2) is res.T.ctx.unram

from fractions import Fraction

import pytest

import oracles as O
from quiverqybe.exactmat import ExactMatrix, four_cycle_holds, tl_scalar
from quiverqybe.heckeforge import (
    IrrationalBranchError,
    NotProportionalError,
    braid_defect_q,
    braid_verdict,
    braided_standard_r,
    flip,
    hecke_defect,
    hecke_defect_quadratic,
    hecke_from_tl,
    projection_r,
    special_q_constraints,
    standard_r,
    tl_braid_scalar,
    tl_from_b,
    tl_generator,
)
from quiverqybe.scalarring import Poly, Q, as_scalar

SAMPLES = (Fraction(2), Fraction(3), Fraction(1, 2))
TOEPLITZ_B = [[0, 1], [-1, 0]]
EXAMPLE_42 = ExactMatrix([["q", 0, 0, 0], [0, 1, "q - q^-1", 0], [0, 0, 1, 0], [0, 0, 0, "q"]])


def fracs(m):
    return [[c.to_fraction() for c in row] for row in m.tolist()]


def test_kulish_example_display():
    x = tl_from_b([[1, 2], [3, 4]])
    b_bar = O.inverse2(O.mat([[1, 2], [3, 4]]))
    expected = [[u * v for v in (x for r in b_bar for x in r)] for u in map(Fraction, (1, 2, 3, 4))]
    assert fracs(x.matrix) == expected
    assert fracs(x.matrix)[0] == [-2, 1, Fraction(3, 2), Fraction(-1, 2)]
    assert x.mu == as_scalar("5/2")
    assert x.matrix @ x.matrix == x.matrix.scale(x.mu)
    assert four_cycle_holds(x.matrix)


def test_weights_factor():
    x = tl_from_b([[1, 2], [3, 4]])
    b, b_bar = x.b.fractions(), x.b_bar.fractions()
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for l in range(2):
                    assert x.matrix[2 * i + j, 2 * k + l].to_fraction() == b[i][j] * b_bar[k][l]
    assert x.b @ x.b_bar == ExactMatrix.identity(2)


def test_identity_and_toeplitz_generators():
    x = tl_from_b([[1, 0], [0, 1]])
    assert x.mu == as_scalar(2)
    t = tl_from_b(TOEPLITZ_B)
    assert t.matrix == ExactMatrix([[0, 0, 0, 0], [0, -1, 1, 0], [0, 1, -1, 0], [0, 0, 0, 0]])
    assert t.mu == as_scalar(-2)


def test_singular_b():
    with pytest.raises(ZeroDivisionError):
        tl_from_b([[1, 2], [2, 4]])


def test_hecke_constraint_polynomials():
    assert hecke_from_tl(tl_from_b(TOEPLITZ_B)).q_constraints == (Poly([1, -2, 1]),)
    assert hecke_from_tl(tl_from_b([[1, 2], [3, 4]])).q_constraints == (Poly([1, Fraction(5, 2), 1]),)


def test_hecke_unconditional_when_mu_matches():
    x = tl_from_b(ExactMatrix([[0, 1], ["-q", 0]]))
    assert x.mu == -(Q + Q.inverse())
    cand = hecke_from_tl(x)
    assert cand.q_constraints == ()
    assert hecke_defect(cand.matrix).is_zero()


def test_hecke_defect_vanishes_on_constraint():
    cand = hecke_from_tl(tl_from_b([[1, 2], [3, 4]]))
    residual = hecke_defect(cand.matrix)
    assert braid_verdict(residual).constraint == cand.q_constraints[0]


def test_tl_generator_wraps_rank_one():
    x = tl_generator(ExactMatrix([[1, 2], [2, 4]]))
    assert x.mu == as_scalar(5)
    with pytest.raises(ValueError):
        tl_generator(ExactMatrix.identity(2))


def test_standard_r_matches_formula():
    assert standard_r(1).matrix == ExactMatrix([["q"]])
    for n in (2, 3):
        r = standard_r(n).matrix
        for q0 in SAMPLES:
            assert fracs(r.evaluate_at(q0)) == O.standard_r_at(n, q0)
    r2 = standard_r(2).matrix
    assert [str(r2[i, i]) for i in range(4)] == ["q", "1", "1", "q"]
    assert str(r2[2, 1]) == "q - q^-1" and r2[1, 2].is_zero()


def test_standard_r_is_not_braid_form():
    # The structure-constant matrix obeys RTT, not the braid/Hecke identities.
    for n in (2, 3):
        r = standard_r(n).matrix
        assert not hecke_defect(r).is_zero()
        assert not braid_defect_q(r).is_zero()
        for q0 in SAMPLES:
            numeric = O.standard_r_at(n, q0)
            assert not O.is_zero(O.hecke_defect_at(numeric, q0))


def test_braided_standard_r_is_hecke_and_braid():
    for n in (1, 2, 3):
        r = braided_standard_r(n).matrix
        assert hecke_defect(r).is_zero()
        assert hecke_defect_quadratic(r).is_zero()
        assert braid_defect_q(r).is_zero()
        for q0 in SAMPLES:
            numeric = O.mul(O.flip(n), O.standard_r_at(n, q0))
            assert O.is_zero(O.hecke_defect_at(numeric, q0))
            assert O.is_zero(O.braid_defect(numeric, n))


def test_example_41_matrix_equals_braided_standard():
    r41 = ExactMatrix([["q", 0, 0, 0], [0, "q - q^-1", 1, 0], [0, 1, 0, 0], [0, 0, 0, "q"]])
    assert r41 == braided_standard_r(2).matrix
    assert hecke_defect(r41).is_zero() and braid_defect_q(r41).is_zero()


def test_example_42_matrix_is_not_hecke():
    # Its middle block [[1, q - q^-1], [0, 1]] has eigenvalue 1 twice.
    assert not hecke_defect(EXAMPLE_42).is_zero()
    assert EXAMPLE_42 == standard_r(2).matrix.T


def test_q_flip_is_not_hecke():
    assert not hecke_defect(flip(2).scale(Q)).is_zero()


def test_flip():
    assert flip(1) == ExactMatrix([[1]])
    assert flip(2) == ExactMatrix([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
    assert flip(3) @ flip(3) == ExactMatrix.identity(9)


def test_projection_r_trivial_cases():
    assert projection_r(ExactMatrix.zeros(4)).matrix == ExactMatrix.identity(4).scale(-Q.inverse())
    assert projection_r(ExactMatrix.identity(4)).matrix == ExactMatrix.identity(4).scale(Q)
    with pytest.raises(ValueError):
        projection_r(ExactMatrix([[1, 1], [0, 0]]).scale(2))


def test_example_45_shape():
    p = (ExactMatrix.identity(4) + flip(2)).scale(Fraction(1, 2))
    assert p == ExactMatrix([[2, 0, 0, 0], [0, 1, 1, 0], [0, 1, 1, 0], [0, 0, 0, 2]]).scale(Fraction(1, 2))
    r = projection_r(p).matrix
    a = (Q - Q.inverse()) / 2
    b = (Q + Q.inverse()) / 2
    assert r == ExactMatrix.identity(4).scale(a) + flip(2).scale(b)
    assert hecke_defect(r).is_zero()


def test_example_45_braid_residual():
    # aI + bF braids only when a^2 b = 0, i.e. on (q^2 - 1)^2 (q^2 + 1).
    p = (ExactMatrix.identity(4) + flip(2)).scale(Fraction(1, 2))
    verdict = braid_verdict(braid_defect_q(projection_r(p).matrix))
    assert verdict.status == "constraint"
    assert verdict.constraint == Poly([1, 0, -1]) * Poly([1, 0, -1]) * Poly([1, 0, 1])


def test_toeplitz_tl_scalars():
    x = tl_from_b(TOEPLITZ_B)
    assert tl_scalar(x.matrix) == as_scalar(-2)
    p = x.matrix.scale(Fraction(-1, 2))
    assert p @ p == p
    assert tl_braid_scalar(p) == as_scalar("1/4")
    assert special_q_constraints(x) == [Poly([1, -1, 1]), Poly([1, 1, 1])]


def test_identity_b_special_q():
    assert special_q_constraints(tl_from_b([[1, 0], [0, 1]])) == [Poly([1, -1, 1]), Poly([1, 1, 1])]


def test_tl_braid_scalar_cases():
    assert tl_braid_scalar(ExactMatrix.identity(4)) == as_scalar(1)
    w = ExactMatrix.column([1, 0, 0, 1])
    assert tl_braid_scalar((w @ w.T).scale(Fraction(1, 2))) == as_scalar("1/4")
    # The uniform unit vector comes from a singular b: no proportionality.
    ones = ExactMatrix.column([1, 1, 1, 1])
    with pytest.raises(NotProportionalError):
        tl_braid_scalar((ones @ ones.T).scale(Fraction(1, 4)))


def test_irrational_branch():
    u = ExactMatrix.column([-2, -2, -2, 2])
    v = ExactMatrix.column([-1, -2, 0, 1])
    x = tl_generator(u @ v.T)
    with pytest.raises(IrrationalBranchError) as info:
        special_q_constraints(x)
    assert info.value.c == Fraction(1, 8)
    assert info.value.quartic.degree == 4


def test_braid_verdict_levels():
    assert braid_verdict(ExactMatrix.zeros(2)).status == "identically"
    assert braid_verdict(ExactMatrix([[1, 0]])).status == "fails"
    v = braid_verdict(ExactMatrix([["q - 1", "q^2 - 1"]]))
    assert v.status == "constraint" and v.constraint == Poly([-1, 1])

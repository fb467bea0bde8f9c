import itertools

import pytest

import oracles as O
from quiverqybe.exactmat import ExactMatrix, tl_scalar
from quiverqybe.quiverlab import (
    Arrow,
    Quiver,
    QuiverError,
    census_check,
    classify,
    groupoid_quiver,
    kronecker_square,
    satisfies_qybe,
)
from quiverqybe.scalarring import as_scalar


def quiver(rows, mode="multi"):
    return Quiver.from_adjacency(ExactMatrix(rows), mode=mode)


def test_construction_and_validation():
    q = Quiver(("u", "v"), (Arrow("e", "u", "v", as_scalar(1)),), "simple")
    assert q.source("e") == "u" and q.range("e") == "v"
    assert q.adjacency() == ExactMatrix([[0, 1], [0, 0]])
    with pytest.raises(QuiverError):
        Quiver(("u",), (Arrow("e", "u", "w", as_scalar(1)),))
    with pytest.raises(QuiverError):
        Quiver(("u",), (Arrow("e", "u", "u", as_scalar(1)), Arrow("e", "u", "u", as_scalar(1))))


def test_parallel_arrows_sum():
    q = Quiver(("u",), (Arrow("a", "u", "u", as_scalar(1)), Arrow("b", "u", "u", as_scalar(1))))
    assert q.adjacency() == ExactMatrix([[2]])


def test_json_round_trip():
    q = quiver([[1, 2], [2, 4]])
    assert Quiver.from_json(q.to_json()) == q
    alt = Quiver.from_json({"adjacency": {"entries": [[1, 2], [2, 4]]}})
    assert alt.vertices == ("v1", "v2")
    assert alt.adjacency() == q.adjacency()


def test_kronecker_square_adjacency_is_kron():
    q = quiver([[0, 1], [1, 1]])
    sq = kronecker_square(q)
    a = [[0, 1], [1, 1]]
    assert [[c.to_fraction() for c in row] for row in sq.adjacency().tolist()] == O.kron(a, a)


def test_worked_example():
    report = satisfies_qybe(quiver([[1, 2], [2, 4]]))
    assert report.holds and report.mu == as_scalar(5) and report.a3_nonzero


def test_nonsymmetric_direct_route():
    report = satisfies_qybe(quiver([[0, 1], [0, 0]]))
    assert report.holds and not report.a3_nonzero
    report = satisfies_qybe(quiver([[1, 1], [0, 1]]))
    assert not report.holds and report.witness is not None


def test_empty_quiver():
    report = satisfies_qybe(Quiver((), ()))
    assert report.holds and report.mu.is_zero()


def test_classify_two_triangles():
    ones = [[1] * 3 for _ in range(3)]
    rows = [r + [0] * 3 for r in ones] + [[0] * 3 + r for r in ones]
    c = classify(quiver(rows))
    assert len(c.components) == 2
    assert all(comp.mu == as_scalar(3) for comp in c.components)
    assert c.global_mu == as_scalar(3)
    assert c.reassemble() == quiver(rows).adjacency()


def test_classify_example_without_global_mu():
    c = classify(quiver([[1, 0], [0, 2]]))
    assert [str(comp.mu) for comp in c.components] == ["1", "2"]
    assert c.global_mu is None


def test_classify_reconstruction_with_isolated_and_permutation():
    rows = [[0, 0, 0], [0, 4, 2], [0, 2, 1]]
    c = classify(quiver(rows))
    assert c.isolated == ["v1"]
    assert c.reassemble() == quiver(rows).adjacency()


def test_classify_refuses_nonsymmetric():
    with pytest.raises(QuiverError):
        classify(quiver([[0, 1], [0, 0]]))


def test_satisfies_qybe_routes_agree_exhaustively():
    for entries in itertools.product(range(3), repeat=4):
        rows = [list(entries[:2]), list(entries[2:])]
        report = satisfies_qybe(quiver(rows))
        a = O.mat(rows)
        a3 = O.mul(O.mul(a, a), a)
        if not O.is_zero(a3):
            assert report.holds == (O.proportional_scalar(O.mul(a, a), a) is not None)


@pytest.mark.parametrize("sizes,mu", [([[1, 1]], 2), ([[2, 2]], 4), ([[1, 2, 3]], 6)])
def test_groupoid_block(sizes, mu):
    adj = groupoid_quiver(sizes).adjacency()
    assert adj @ adj == adj.scale(mu)
    assert adj[0, 2 if len(sizes[0]) > 2 else 1] == as_scalar(sizes[0][-1])


def test_groupoid_negative_example():
    adj = groupoid_quiver([[1], [2]]).adjacency()
    assert adj == ExactMatrix([[1, 0], [0, 2]])
    assert tl_scalar(adj) is None
    with pytest.raises(QuiverError):
        groupoid_quiver([])


def test_census_modes():
    assert census_check(4, "simple").ok
    loops = census_check(3, "loops")
    assert loops.ok and loops.satisfying == {1: 2, 2: 5, 3: 12}
    multi = census_check(2, "multi")
    assert multi.ok
    assert multi.notes


def test_census_limit():
    with pytest.raises(ValueError):
        census_check(7, "simple")

import itertools

import pytest

from qrooks import poly, rooks
from qrooks.partitions import Partition, conjugate, diagonal_vector, enumerate_partitions, staircase

from .oracles import stirling2

PROP3 = poly.from_text(
    "q^22 + 3*q^21 + 7*q^20 + 13*q^19 + 18*q^18 + 21*q^17 + 22*q^16 + 20*q^15 + 21*q^14"
    " + 20*q^13 + 17*q^12 + 12*q^11 + 5*q^10 + 4*q^9 + 3*q^8 + 2*q^7 + q^6"
)
NINE_SQUARED = poly.mul(poly.q_integer(9), poly.q_integer(9))


def partitions_upto(n):
    for m in range(n + 1):
        yield from enumerate_partitions(m)


def test_inversion_number_figure():
    assert rooks.inversion_number((6, 5, 3, 3), {(1, 5), (3, 1), (4, 3)}) == 5


def test_inversion_number_small():
    assert rooks.inversion_number((3, 2), ()) == 5
    assert rooks.inversion_number((2,), {(1, 1)}) == 1
    assert rooks.inversion_number((2,), {(1, 2)}) == 0


def test_invalid_placements():
    with pytest.raises(rooks.InvalidPlacementError):
        rooks.inversion_number((2, 1), {(2, 2)})
    with pytest.raises(rooks.InvalidPlacementError):
        rooks.inversion_number((2, 2), {(1, 1), (2, 1)})
    with pytest.raises(rooks.InvalidPlacementError):
        rooks.inversion_number((2, 2), {(1, 1), (1, 2)})


def test_enumerate_examples():
    assert rooks.qrook_enumerate((2,), 1) == (1, 1)
    assert rooks.qrook_enumerate((4, 1), 1) == (0, 1, 1, 2, 1)
    assert rooks.qrook_enumerate((3, 2), 0) == poly.monomial(5)
    assert rooks.qrook_enumerate((2, 1), 3) == poly.ZERO


def test_placements_count_matches_brute_force():
    lam = (4, 3, 3, 1)
    cells = list(Partition(lam).cells())
    for k in range(5):
        brute = sum(
            1
            for combo in itertools.combinations(cells, k)
            if len({a for a, _ in combo}) == k and len({b for _, b in combo}) == k
        )
        assert sum(1 for _ in rooks.placements(lam, k)) == brute


def test_recurrence_examples():
    assert rooks.qrook((10, 9, 3, 2, 1), 2) == PROP3
    assert rooks.qrook((10, 9), 2) == NINE_SQUARED
    assert rooks.qrook((), 0) == poly.ONE
    assert rooks.qrook((), 1) == poly.ZERO
    assert rooks.qrook((3, 1), 5) == poly.ZERO


def test_prop3_intermediate_steps():
    q = (0, 1)
    lhs = rooks.qrook((10, 9, 3, 2, 1), 2)
    assert lhs == poly.add(poly.mul(q, rooks.qrook((10, 9, 3, 2), 2)), rooks.qrook((9, 8, 2, 1), 1))
    assert rooks.qrook((10, 9, 3, 2), 2) == poly.add(
        poly.shift(rooks.qrook((10, 9, 3), 2), 2), poly.mul((1, 1), rooks.qrook((9, 8, 2), 1))
    )
    assert rooks.qrook((10, 9, 3), 2) == poly.add(
        poly.shift(NINE_SQUARED, 3), poly.mul((1, 1, 1), rooks.qrook_rank_one((9, 8)))
    )


def test_prop3_value_at_one():
    # sum of the seventeen printed coefficients
    assert len([c for c in PROP3 if c]) == 17
    assert poly.eval_at_one(PROP3) == 190
    assert rooks.rook_number((10, 9, 3, 2, 1), 2) == 190
    assert sum(1 for _ in rooks.placements((10, 9, 3, 2, 1), 2)) == 190


def test_full_rank_examples():
    assert rooks.qrook_full_rank((10, 9)) == NINE_SQUARED
    assert rooks.qrook_full_rank((2, 1)) == poly.ONE == rooks.qrook_enumerate((2, 1), 2)
    assert rooks.qrook_full_rank((1, 1)) == poly.ZERO


def test_rank_one_examples():
    assert rooks.qrook_rank_one((4, 1)) == (0, 1, 1, 2, 1)
    assert rooks.qrook_rank_one((1,)) == poly.ONE
    assert rooks.qrook_rank_one((2, 1)) == (0, 2, 1)
    assert rooks.qrook_rank_one(()) == poly.ZERO


def test_all_ranks_and_total():
    assert rooks.qrook_all((2, 1)) == [(0, 0, 0, 1), (0, 2, 1), (1,)]
    assert rooks.qrook_all((1,)) == [(0, 1), (1,)]
    assert rooks.qrook_all(()) == [(1,)]
    assert rooks.total_qrook((2, 1)) == (1, 2, 1, 1)
    assert rooks.total_qrook((1,)) == (1, 1)
    assert rooks.total_qrook(()) == (1,)


def test_rook_numbers_staircase():
    assert rooks.rook_number((3, 2, 1), 1) == 6
    assert rooks.rook_number((3, 2, 1), 2) == 7
    assert rooks.rook_number((5, 3), 0) == 1


def test_recurrence_matches_enumeration():
    for lam in partitions_upto(8):
        for k in range(len(lam) + 2):
            assert rooks.qrook(lam, k) == rooks.qrook_enumerate(lam, k), (lam, k)


def test_closed_forms_match_recurrence():
    for lam in partitions_upto(12):
        if not lam:
            continue
        assert rooks.qrook(lam, len(lam)) == rooks.qrook_full_rank(lam), lam
        assert rooks.qrook(lam, 1) == rooks.qrook_rank_one(lam), lam


def test_conjugation_invariance():
    for lam in partitions_upto(10):
        mu = conjugate(Partition(lam))
        for k in range(max(len(lam), len(mu)) + 1):
            assert rooks.qrook(lam, k) == rooks.qrook(mu, k)


def test_equivalence_theorem_small_sizes():
    for n in range(13):
        parts = list(enumerate_partitions(n))
        keys = {lam: tuple(rooks.qrook_all(lam)) for lam in parts}
        top = max(len(lam) for lam in parts)
        padded = {lam: keys[lam] + (poly.ZERO,) * (top + 1 - len(keys[lam])) for lam in parts}
        for lam, mu in itertools.combinations(parts, 2):
            assert (diagonal_vector(lam) == diagonal_vector(mu)) == (padded[lam] == padded[mu])


def test_are_q_rook_equivalent():
    assert rooks.are_q_rook_equivalent((3, 1), (3, 1))
    lam = Partition((10, 9, 3, 2, 1))
    assert rooks.are_q_rook_equivalent(lam, conjugate(lam))
    assert rooks.are_q_rook_equivalent((2,), (1, 1))
    assert not rooks.are_q_rook_equivalent((2,), (2, 1))


def test_degree_and_coefficient_bounds():
    for lam in partitions_upto(10):
        n = sum(lam)
        rs = rooks.qrook_all(lam)
        assert poly.degree(rs[0]) == n
        for k, r in enumerate(rs):
            assert all(c >= 0 for c in r)
            if k >= 1 and r:
                assert poly.degree(r) <= n - k


@pytest.mark.parametrize("n", range(1, 10))
def test_staircase_rook_numbers_are_stirling(n):
    d = staircase(n)
    for k in range(n):
        assert rooks.rook_number(d, k) == stirling2(n, n - k)


def test_memo_is_cache_only():
    lam = (7, 5, 4, 2, 2)
    before = rooks.qrook_all(lam)
    rooks.clear_memo()
    assert rooks.memo_size() == 0
    old = rooks.MEMO_LIMIT
    rooks.MEMO_LIMIT = 3
    try:
        assert rooks.qrook_all(lam) == before
    finally:
        rooks.MEMO_LIMIT = old
    assert rooks.qrook_all(lam) == before


# ---------------------------------------------------------------- finite fields

@pytest.mark.parametrize("order", rooks.SUPPORTED_FIELDS)
def test_field_tables_are_fields(order):
    f = rooks.FiniteField(order)
    for x in range(order):
        assert f.add[x][0] == x and f.mul[x][1] == x
        assert f.add[x][f.neg[x]] == 0
        if x:
            assert f.mul[x][f.inv[x]] == 1
    for x, y, z in itertools.product(range(order), repeat=3):
        assert f.mul[x][f.add[y][z]] == f.add[f.mul[x][y]][f.mul[x][z]]


def test_matrix_count_examples():
    assert rooks.count_rank_matrices((1,), 2, 1) == 1
    assert rooks.count_rank_matrices((2,), 3, 1) == 8
    assert sum(rooks.count_rank_matrices((2, 1), 2, r) for r in range(3)) == 8


def test_matrix_count_bounds():
    with pytest.raises(ValueError, match="unsupported"):
        rooks.count_rank_matrices((1,), 6, 1)
    with pytest.raises(ValueError, match="16"):
        rooks.count_rank_matrices((9, 8), 2, 1)


@pytest.mark.parametrize("order", [4, 5])
def test_matrix_count_other_fields(order):
    for lam in [(1,), (2,), (2, 1), (1, 1), (3,)]:
        for r in range(len(lam) + 1):
            assert rooks.count_rank_matrices(lam, order, r) == rooks.predicted_rank_count(lam, order, r)

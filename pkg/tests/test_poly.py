import itertools

import pytest
from hypothesis import given, strategies as st

from qrooks import poly

from .oracles import unimodal_by_peaks

polys = st.lists(st.integers(-50, 50), max_size=8).map(poly.normalize)
nonneg = st.lists(st.integers(0, 20), max_size=12)


def test_add_examples():
    p = (1, 2, 1)
    assert poly.add(poly.ZERO, p) == p
    assert poly.add((1, 1), (0, 1)) == (1, 2)
    assert poly.add(p, p) == (2, 4, 2)
    assert poly.add((1, 1), (0, -1)) == (1,)
    assert poly.add((1, 1), (-1, -1)) == poly.ZERO


def test_mul_examples():
    assert poly.mul(poly.ONE, (3, 0, 2)) == (3, 0, 2)
    assert poly.mul((1, 1), (1, 1)) == (1, 2, 1)
    nine = poly.mul(poly.q_integer(9), poly.q_integer(9))
    assert nine == tuple(list(range(1, 10)) + list(range(8, 0, -1)))
    assert poly.degree(nine) == 16


def test_shift():
    assert poly.shift(poly.ONE, 3) == (0, 0, 0, 1)
    assert poly.shift(poly.ZERO, 5) == poly.ZERO
    assert poly.shift((1, 1), 1) == (0, 1, 1)
    with pytest.raises(ValueError):
        poly.shift((1,), -1)


def test_q_integer():
    assert poly.q_integer(1) == (1,)
    assert poly.q_integer(9) == (1,) * 9
    assert poly.q_integer(0) == poly.ZERO
    assert poly.q_integer(-3) == poly.ZERO


def test_eval_at_one():
    assert poly.eval_at_one(poly.ZERO) == 0
    assert poly.eval_at_one(poly.power(poly.q_integer(9), 2)) == 81


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert poly.add(a, b) == poly.add(b, a)
    assert poly.mul(a, b) == poly.mul(b, a)
    assert poly.add(poly.add(a, b), c) == poly.add(a, poly.add(b, c))
    assert poly.mul(poly.mul(a, b), c) == poly.mul(a, poly.mul(b, c))
    assert poly.mul(a, poly.add(b, c)) == poly.add(poly.mul(a, b), poly.mul(a, c))
    assert poly.mul(a, poly.ONE) == a
    assert poly.add(a, poly.ZERO) == a
    assert poly.mul(a, poly.ZERO) == poly.ZERO


@given(polys, polys)
def test_canonical_form_and_degree(a, b):
    s = poly.mul(a, b)
    assert not s or s[-1] != 0
    if a and b:
        assert poly.degree(s) == poly.degree(a) + poly.degree(b)


@given(st.integers(0, 30), st.integers(0, 30))
def test_q_integer_product_at_one(a, b):
    assert poly.eval_at_one(poly.mul(poly.q_integer(a), poly.q_integer(b))) == a * b


@given(polys, st.integers(-2, 12))
def test_mul_q_integer_matches_mul(a, n):
    assert poly.mul_q_integer(a, n) == poly.mul(a, poly.q_integer(n))


# ---------------------------------------------------------------- shape tests

PROP3_ASC = (0, 0, 0, 0, 0, 0, 1, 2, 3, 4, 5, 12, 17, 20, 21, 20, 22, 21, 18, 13, 7, 3, 1)


def test_unimodal_examples():
    assert poly.is_unimodal(PROP3_ASC) == (False, (14, 15, 16))
    assert PROP3_ASC[14] == 21 and PROP3_ASC[15] == 20 and PROP3_ASC[16] == 22
    assert poly.is_unimodal((1, 2, 2, 1)) == (True, None)
    ok, w = poly.is_unimodal((1, 0, 1))
    assert not ok and w == (0, 1, 2)
    assert poly.is_unimodal(()) == (True, None)


def test_unimodal_rejects_negative():
    with pytest.raises(poly.NegativeCoefficientError):
        poly.is_unimodal((1, -1, 2))
    with pytest.raises(ValueError):
        poly.is_log_concave((0, -2))


def test_unimodal_agrees_with_peak_oracle_exhaustively():
    for length in range(9):
        for a in itertools.product(range(4), repeat=length):
            ok, witness = poly.is_unimodal(a)
            assert ok == unimodal_by_peaks(a), a
            if not ok:
                i, j, k = witness
                assert i < j < k and a[i] > a[j] < a[k]


def test_log_concave_examples():
    # R_1(<4,1>) = q^4 + 2q^3 + q^2 + q
    assert poly.is_log_concave((0, 1, 1, 2, 1)) == (False, 2)
    # R(<2,1>) = 1 + 2q + q^2 + q^3
    assert poly.is_log_concave((1, 2, 1, 1)) == (False, 2)
    assert poly.is_log_concave((1, 1, 1)) == (True, None)
    assert poly.is_log_concave((0, 0, 3)) == (True, None)


def test_log_concave_internal_zero():
    assert poly.is_log_concave((1, 0, 0, 1)) == (False, 1)
    assert poly.is_log_concave((0, 2, 0, 1)) == (False, 2)


@given(nonneg)
def test_log_concave_contiguous_implies_unimodal(a):
    support = [i for i, c in enumerate(a) if c]
    contiguous = not support or all(a[i] for i in range(support[0], support[-1] + 1))
    if contiguous and poly.is_log_concave(a)[0]:
        assert poly.is_unimodal(a)[0]


# ---------------------------------------------------------------- rendering

def test_text_matches_display_order():
    assert poly.to_text((0, 1, 1, 2, 1)) == "q^4 + 2*q^3 + q^2 + q"
    assert poly.to_text(poly.ZERO) == "0"
    assert poly.to_text((1,)) == "1"
    assert poly.to_text((3, -1)) == "-q + 3"


@given(polys)
def test_text_and_json_round_trip(a):
    assert poly.from_text(poly.to_text(a)) == a
    assert poly.from_json(poly.to_json(a)) == a


def test_json_uses_decimal_strings():
    big = 10**40 + 7
    assert poly.to_json((big, 1)) == {"coeffs": [str(big), "1"]}

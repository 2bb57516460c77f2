from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from winf.exact import QSeries, euler_phi
from winf.qchar import (
    FundWeightSum,
    c_qchar_naive,
    conjugate_partition,
    hook_product,
    qchar,
    raw_weylkac_qchar,
    walg_char,
    wb_identity,
    wd_identity,
    young_factor,
)

H = Fraction(1, 2)


def mono(e, order, c=1):
    return QSeries.monomial(e, order, c)


def test_gl_vacuum_partitions():
    s = qchar(FundWeightSum("gl", (), 1), 5)
    assert s.integer_coeffs() == [1, 1, 2, 3, 5, 7]


def test_gl_two_weights():
    order = 4
    s = qchar(FundWeightSum("gl", (1, 0)), order)
    want = (QSeries.one(order) - mono(2, order)) / euler_phi(order) ** 2
    assert s == want


def test_d_identity_rank_one():
    lhs, rhs = wd_identity(1, 5)
    assert lhs == rhs == QSeries.one(5) / euler_phi(5)


def test_central_charges():
    assert FundWeightSum("b", (2, 1), 3).c == Fraction(7, 2)
    assert FundWeightSum("c", (2, 1), 3).c == 5
    assert FundWeightSum("d", (2, 1, 1), 4).c == 4


def test_bad_weight():
    with pytest.raises(ValueError):
        FundWeightSum("c", (0,), 1)
    with pytest.raises(ValueError):
        FundWeightSum("e", (), 1)


def test_raw_trivial():
    assert raw_weylkac_qchar("b", [], 0, 8) == QSeries.one(8)


def test_raw_matches_closed_examples():
    b1 = FundWeightSum("b", (1,), 0)
    assert raw_weylkac_qchar("b", b1.labels(), b1.c, 6) == qchar(b1, 6)
    c0 = FundWeightSum("c", (), 1)
    assert raw_weylkac_qchar("c", c0.labels(), c0.c, 6) == qchar(c0, 6)


def test_c_vacuum_value():
    """ch(c, Lambda_0) = (1 - q^2)/phi(q); the naive simplification gives 1/phi."""
    order = 10
    w = FundWeightSum("c", (), 1)
    want = (QSeries.one(order) - mono(2, order)) / euler_phi(order)
    assert qchar(w, order) == want
    assert c_qchar_naive(w, order) == QSeries.one(order) / euler_phi(order)


def test_walg_examples():
    order = 5
    phi = euler_phi(order)
    assert walg_char("WD", 1, order) == QSeries.one(order) / phi
    one_minus_q = QSeries.one(order) - mono(1, order)
    assert walg_char("WD", 2, order) == one_minus_q * one_minus_q / phi**2


def test_walg_b_super_rank_one():
    order = Fraction(9, 2)
    phi = euler_phi(order)
    tail = QSeries.one(order)
    for n in range(1, 5):
        tail = tail * (QSeries.one(order) + mono(n + H, order))
    assert walg_char("WB-super", 1, order) == (QSeries.one(order) - mono(1, order)) / phi * tail


def test_identities_to_fifteen():
    for l in (1, 2, 3):
        lhs, rhs = wd_identity(l, 15)
        assert lhs == rhs
    for l in (1, 2):
        lhs, rhs = wb_identity(l, 15)
        assert lhs == rhs


def test_weight_json_round_trip():
    w = FundWeightSum("d", (3, 1), 2)
    assert FundWeightSum.from_json(w.to_json()) == w


def test_conjugate_partition():
    assert conjugate_partition([3, 1]) == [2, 1, 1]
    assert conjugate_partition([]) == []


weights = st.builds(
    lambda alg, n, h: FundWeightSum(alg, tuple(n), h),
    st.sampled_from(["b", "c", "d"]),
    st.lists(st.integers(1, 4), max_size=3),
    st.integers(0, 3),
)


@settings(max_examples=40, deadline=None)
@given(weights)
def test_coefficients_are_nonnegative_integers(w):
    s = qchar(w, 10)
    assert s.is_integral()
    assert all(c >= 0 for _, c in s.items())


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["b", "c"]), st.lists(st.integers(1, 4), max_size=3), st.integers(0, 3))
def test_raw_equals_closed(alg, n, h):
    w = FundWeightSum(alg, tuple(n), h)
    assert raw_weylkac_qchar(alg, w.labels(), w.c, 12) == qchar(w, 12)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 5), max_size=4))
def test_hook_identity(parts):
    assert young_factor(parts, 15) == hook_product(parts, 15)

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from winf.exact import (
    Poly,
    QSeries,
    Quasipoly,
    XSeries,
    analytic_series,
    euler_phi,
    falling_factorial,
    minimal_annihilator,
    rat,
    rat_str,
)

H = Fraction(1, 2)

rats = st.fractions(min_value=-5, max_value=5, max_denominator=6)
polys = st.lists(rats, min_size=0, max_size=5).map(Poly)


def test_rat_canonical():
    assert rat("-6/4") == Fraction(-3, 2)
    assert rat_str(Fraction(4, 2)) == "2"
    assert rat_str(Fraction(-3, 6)) == "-1/2"


def test_rat_rejects_float():
    with pytest.raises((TypeError, ValueError)):
        rat(0.5)


def test_falling_factorial():
    """[x]_0 = 1, [x]_2 = x^2 - x, [x]_3 = x^3 - 3x^2 + 2x."""
    assert falling_factorial(0) == Poly.const(1)
    assert falling_factorial(2) == Poly([0, -1, 1])
    assert falling_factorial(3) == Poly([0, 2, -3, 1])


def test_analytic_cosh():
    assert analytic_series("cosh", 1, 4) == XSeries([1, 0, H, 0, Fraction(1, 24)], 4)


def test_analytic_tanh_quarter():
    assert analytic_series("tanh", Fraction(1, 4), 3) == XSeries([0, Fraction(1, 4), 0, Fraction(-1, 192)], 3)


def test_euler_phi_to_five():
    assert euler_phi(5) == QSeries.from_dict({0: 1, 1: -1, 2: -1, 5: 1}, 5)


def test_phi_times_partitions_is_one():
    order = 30
    p = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135, 176, 231, 297, 385, 490, 627,
         792, 1002, 1255, 1575, 1958, 2436, 3010, 3718, 4565, 5604]
    parts = QSeries.from_dict(dict(enumerate(p)), order)
    assert euler_phi(order) * parts == QSeries.one(order)


def test_qseries_half_integer_exponents():
    s = QSeries.monomial(H, 3) * QSeries.monomial(Fraction(3, 2), 3)
    assert s == QSeries.monomial(2, 3)
    assert QSeries.monomial(Fraction(7, 2), 3) == QSeries.zero(3)


def test_minimal_annihilator_examples():
    assert minimal_annihilator(Quasipoly.cosh(1), "even") == Poly([-1, 0, 1])
    assert minimal_annihilator(Quasipoly.cosh(0), "odd") == Poly.x()
    b = Poly([-Fraction(1, 4), 0, 1])
    assert minimal_annihilator(Quasipoly.sinh(H, Poly.x()), "even") == b * b


def test_minimal_annihilator_zero():
    assert minimal_annihilator(Quasipoly(), "even") == Poly.const(1)


def test_quasipoly_sign_normalization():
    """sinh(-a x) p = sinh(a x) (-p); sinh(0 x) drops out."""
    assert Quasipoly.sinh(-2, 3) == Quasipoly.sinh(2, -3)
    assert Quasipoly.sinh(0, 5).is_zero()


@given(polys, polys)
def test_poly_gcd_divides(a, b):
    g = a.gcd(b)
    if not g.is_zero():
        assert g.divides(a) and g.divides(b)


@given(polys, polys, polys)
def test_poly_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)


@given(st.lists(rats, max_size=6), st.lists(rats, max_size=6), st.lists(rats, max_size=6))
def test_qseries_associative_commutative(x, y, z):
    order = 5
    a, b, c = (QSeries.from_dict({Fraction(i, 2): v for i, v in enumerate(l)}, Fraction(order, 2)) for l in (x, y, z))
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)


@settings(max_examples=40)
@given(st.lists(st.tuples(st.sampled_from(["cosh", "sinh"]), st.fractions(0, 3, max_denominator=4), polys), max_size=3))
def test_quasipoly_expansion_matches_terms(terms):
    """The canonical form expands to the same series as the raw terms."""
    q = Quasipoly(terms)
    order = 8
    raw = XSeries([0] * (order + 1), order)
    for kind, a, p in terms:
        raw = raw + XSeries.from_poly(p, order) * analytic_series(kind, a, order)
    assert q.to_xseries(order) == raw


@settings(max_examples=40)
@given(st.lists(st.tuples(st.sampled_from(["cosh", "sinh"]), st.fractions(0, 3, max_denominator=4), polys), max_size=3),
       st.sampled_from(["even", "odd"]))
def test_minimal_annihilator_kills(terms, parity):
    F = Quasipoly(terms)
    b = minimal_annihilator(F, parity)
    assert F.apply_operator(b).is_zero()
    assert b.parity() in (parity, "zero") or b == Poly.const(1)

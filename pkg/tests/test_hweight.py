import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from winf.exact import Poly, Quasipoly
from winf.hweight import (
    HWeight,
    QuasifiniteError,
    Spectrum,
    classify,
    delta_from_spectrum,
    random_spectrum,
    realize_partition,
    spectrum_from_delta,
    spectrum_from_labels,
    unitary_root_condition,
    unitary_via_realization,
)

H = Fraction(1, 2)
seeds = st.integers(0, 10**6)
signs = st.sampled_from(["+", "-"])


def test_zero_delta_is_vacuum():
    sp = spectrum_from_delta(HWeight("-", 3, Quasipoly()))
    assert sp.even == {H: Poly.const(3)} and not sp.odd


def test_cosh_spectrum():
    F = Quasipoly.cosh(1) - Quasipoly.cosh(H)
    sp = spectrum_from_delta(HWeight("-", 1, F))
    assert sp == Spectrum.from_lists("-", [(1, 1)])


def test_x_sinh_is_odd_type():
    sp = spectrum_from_delta(HWeight("-", 0, Quasipoly.sinh(1, Poly.x())))
    assert sp.odd == {Fraction(1): Poly.x()}
    assert sp.even == {}


def test_plus_vacuum_exponent_zero():
    assert delta_from_spectrum(Spectrum.from_lists("+", [(0, 1)])).F.is_zero()
    assert delta_from_spectrum(Spectrum.from_lists("-", [])).F.is_zero()


def test_not_quasifinite():
    with pytest.raises(QuasifiniteError):
        spectrum_from_delta(HWeight("-", 0, Quasipoly.cosh(1)))
    with pytest.raises(QuasifiniteError):
        spectrum_from_delta(HWeight("+", 0, Quasipoly.sinh(1)))


def test_charge_mismatch_rejected():
    with pytest.raises(ValueError):
        Spectrum("-", {Fraction(1): Poly.const(1)}, {}, 2)


def test_labels_round_trip():
    w = HWeight("-", 1, Quasipoly.cosh(1) - Quasipoly.cosh(H))
    back = HWeight.from_labels("-", w.labels(15), 1)
    assert back.F == w.F


def test_classify_cosh():
    cl = classify(Spectrum.from_lists("-", [(1, 1)]))
    assert cl.primitive and cl.positive_primitive and cl.unitary
    assert cl.char_poly == Poly([-1, 0, 1])


def test_classify_nonconstant_multiplicity():
    cl = classify(Spectrum.from_lists("-", [(Fraction(1, 3), Poly([0, 0, 1]))]))
    assert not cl.primitive


def test_classify_negative_multiplicity():
    cl = classify(Spectrum.from_lists("-", [(1, -1)]))
    assert cl.primitive and not cl.positive_primitive and not cl.unitary


def test_labels_c_map_vacuum():
    sp = spectrum_from_labels("c", H, 0, {0: [1]}, [1])
    assert sp == Spectrum.from_lists("-", [(0, 1)])


def test_labels_d_map_vacuum():
    l = 3
    sp = spectrum_from_labels("d", 0, 0, {0: [2 * l]}, [l])
    assert sp == Spectrum.from_lists("+", [(0, l)])
    assert delta_from_spectrum(sp).F.is_zero()


def test_labels_gl_minus():
    sp = spectrum_from_labels("gl-", Fraction(1, 3), 0, {0: [1]}, [1])
    assert sp == Spectrum.from_lists("-", [(Fraction(-1, 6), 1)])


def test_labels_wrong_s_for_map():
    with pytest.raises(ValueError):
        spectrum_from_labels("c", 0, 0, {0: [1]}, [1])


def test_realize_two_classes():
    sp = Spectrum.from_lists("-", [(Fraction(1, 3), 1), (0, 1)])
    cd = realize_partition(sp)
    got = sorted((e.algebra, e.s) for e in cd.entries)
    assert got == [("c", H), ("gl", Fraction(1, 6))]


def test_realize_integer_exponent_goes_to_c():
    """Exponent 1 sits in the class of 1/2 (e = 1/2 - s - k), label at k = 1."""
    cd = realize_partition(Spectrum.from_lists("-", [(1, 1)]))
    assert len(cd.entries) == 1
    e = cd.entries[0]
    assert (e.algebra, e.s, e.h) == ("c", H, {1: [1]})


def test_realize_empty():
    assert realize_partition(Spectrum.from_lists("-", [])).entries == ()


def test_spectrum_json_round_trip():
    sp = Spectrum.from_lists("+", [(Fraction(2, 3), Poly([1, 0, 5]))], [(1, Poly([0, -2]))])
    assert Spectrum.from_json(sp.to_json()) == sp


@given(seeds, signs)
def test_round_trip(seed, sign):
    sp = random_spectrum(random.Random(seed), sign)
    assert spectrum_from_delta(delta_from_spectrum(sp)) == sp
    assert sum((p.coeff(0) for p in sp.even.values()), Fraction(0)) == sp.c


@given(seeds, signs)
def test_reverse_round_trip(seed, sign):
    w = delta_from_spectrum(random_spectrum(random.Random(seed), sign))
    assert delta_from_spectrum(spectrum_from_delta(w)) == w


@settings(max_examples=60)
@given(seeds, signs)
def test_realization_reproduces_spectrum(seed, sign):
    sp = random_spectrum(random.Random(seed), sign)
    H_total, c = Quasipoly(), Fraction(0)
    for e in realize_partition(sp).entries:
        part = spectrum_from_labels(e.map_name(sign), e.s, e.m, e.h, e.c)
        H_total = H_total + part.quasipoly()
        c += part.c
    assert H_total == sp.quasipoly() and c == sp.c


@st.composite
def primitive_spectra(draw):
    sign = draw(signs)
    exps = draw(st.lists(st.fractions(0, 3, max_denominator=4), min_size=0, max_size=3, unique=True))
    mults = [draw(st.integers(-2, 3).filter(bool)) for _ in exps]
    return Spectrum.from_lists(sign, list(zip(exps, mults)))


@settings(max_examples=80)
@given(primitive_spectra())
def test_unitarity_two_routes(sp):
    cl = classify(sp)
    assert cl.unitary == unitary_via_realization(sp)
    if cl.unitary:
        assert unitary_root_condition(cl.char_poly, sp.sign)

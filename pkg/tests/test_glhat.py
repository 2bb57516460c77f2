import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from winf.dhat import DOp, bracket, random_dop, random_member
from winf.exact import Poly
from winf.glhat import (
    BoundaryError,
    RmPoly,
    Window,
    central_correction,
    classical_membership,
    hat_phi,
    hat_phi_correction,
    labels_from_weight,
    nu_shift,
    phi,
    window_bracket,
)

H = Fraction(1, 2)
seeds = st.integers(0, 10**6)
shifts = st.sampled_from([Fraction(0), H, -H, Fraction(1, 3)])


def E(i, j, N=4, m=0):
    return Window.unit(N, m, i, j)


def test_bracket_e01_e10():
    """With J = sum_{i<=0} E_ii the pair (E_01, E_10) straddles 0 and the cocycle is 1."""
    w = window_bracket(E(0, 1), E(1, 0))
    assert w.entries == {(0, 0): RmPoly([1], 0), (1, 1): RmPoly([-1], 0)}
    assert w.central == RmPoly([1], 0)


def test_bracket_below_zero_has_no_cocycle():
    w = window_bracket(E(-1, 0), E(0, -1))
    assert w.central == RmPoly([0], 0)


def test_bracket_antisymmetric():
    a = window_bracket(E(0, 1), E(1, 0))
    b = window_bracket(E(1, 0), E(0, 1))
    assert a.entries == {k: -v for k, v in b.entries.items()}
    assert a.central == -b.central


def test_bracket_boundary_error():
    with pytest.raises(BoundaryError):
        window_bracket(Window.unit(2, 0, -2, 1), Window.unit(2, 0, 1, -1))


def test_phi_of_d_is_diagonal():
    s, N = Fraction(2, 7), 3
    w = phi(s, 0, "general", DOp.D(), N)
    assert w.entries == {(j, j): RmPoly([-j + s], 0) for j in range(-N, N + 1) if j != s}


def test_phi_of_t():
    w = phi(0, 1, "general", DOp.t(1), 3)
    assert w.entries == {(j - 1, j): RmPoly([1, 0], 1) for j in range(-2, 4)}


def test_phi_half_lands_in_c():
    g = Poly([0, 1, 0, 2])
    a = DOp.t(2, g.shift(1))
    assert classical_membership("c", phi(H, 2, "minus", a, 8))


def test_phi_variant_mismatch():
    with pytest.raises(ValueError):
        phi(0, 0, "minus", DOp.D(2), 3)


def test_corrections_examples():
    assert hat_phi_correction(0, 0, "minus", 1) == RmPoly([0], 0)
    assert hat_phi_correction(0, 0, "plus", 1) == RmPoly([0], 0)
    for s in (Fraction(1, 3), Fraction(-5, 2), Fraction(4)):
        assert hat_phi_correction(s, 0, "minus", 1) == RmPoly([s * (s - 1) / 2], 0)


def test_correction_rejects_even_degree():
    with pytest.raises(ValueError):
        hat_phi_correction(0, 0, "minus", 2)


def test_membership_examples():
    a = Window(4, 0, {(1, 2): 1, (-1, 0): -1})
    assert classical_membership("d", a)
    assert not classical_membership("c", E(0, 0))
    for kind in ("b-", "b+", "c", "d"):
        assert classical_membership(kind, Window(4, 0))


def test_labels_zero_weight():
    out = labels_from_weight("c", {}, [0])
    assert all(v == [0] for v in out["h"].values())


def test_labels_gl_vacuum():
    out = labels_from_weight("gl", {}, [1])
    assert out["c"] == [1]
    assert {i: v[0] for i, v in out["h"].items() if v[0]} == {0: 1}


def test_labels_d_zeroth():
    lam1, lam2, c = Fraction(2), Fraction(1, 2), Fraction(3)
    out = labels_from_weight("d", {1: [lam1], 2: [lam2]}, [c])
    assert out["h"][0] == [-lam1 - lam2 + 2 * c]


def test_window_json_round_trip():
    a = hat_phi(H, 2, DOp({1: Poly([1, 2]), 0: Poly([0, 1])}), 4)
    assert Window.from_json(a.to_json()).to_json() == a.to_json()


@settings(max_examples=30, deadline=None)
@given(seeds, shifts, st.integers(0, 2))
def test_homomorphism(seed, s, m):
    rng = random.Random(seed)
    a, b = random_dop(rng, 4, 3), random_dop(rng, 4, 3)
    N = 10
    lhs = window_bracket(hat_phi(s, m, a, N), hat_phi(s, m, b, N))
    rhs = hat_phi(s, m, bracket(a, b), N).restrict(lhs.N)
    assert lhs.entries == rhs.entries
    assert lhs.central == rhs.central


@settings(max_examples=30, deadline=None)
@given(seeds, shifts, st.integers(0, 2))
def test_central_free_homomorphism(seed, s, m):
    """The uncorrected map preserves brackets up to the central term."""
    rng = random.Random(seed)
    a, b = random_dop(rng, 4, 3), random_dop(rng, 4, 3)
    N = 10
    lhs = window_bracket(phi(s, m, "general", a, N), phi(s, m, "general", b, N))
    rhs = phi(s, m, "general", bracket(a, b).noncentral(), N).restrict(lhs.N)
    assert lhs.entries == rhs.entries


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_images_in_classical_algebras(seed):
    rng = random.Random(seed)
    for sign, s, variant, kind in (("-", 0, "minus", "b-"), ("-", H, "minus", "c"),
                                   ("+", 0, "plus", "d"), ("+", -H, "plus", "b+")):
        a = random_member(rng, sign)
        assert classical_membership(kind, phi(s, 2, variant, a, 10))


@settings(max_examples=40, deadline=None)
@given(seeds, shifts)
def test_nu_shift(seed, s):
    """phi_{s+1} = nu o phi_s on the interior."""
    rng = random.Random(seed)
    a = random_dop(rng, 3, 3)
    N = 6
    assert nu_shift(phi(s, 1, "general", a, N)).entries == phi(s + 1, 1, "general", a, N).restrict(N - 1).entries


@settings(max_examples=30, deadline=None)
@given(seeds, shifts, st.integers(0, 2))
def test_correction_generating_function(seed, s, m):
    """Corrections are linear in f."""
    rng = random.Random(seed)
    f = Poly([rng.randint(-3, 3) for _ in range(5)])
    g = Poly([rng.randint(-3, 3) for _ in range(4)])
    assert central_correction(s, m, f + g) == central_correction(s, m, f) + central_correction(s, m, g)

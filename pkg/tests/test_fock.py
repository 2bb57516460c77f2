import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from winf.dhat import DOp, bracket, random_member
from winf.exact import QSeries
from winf.fock import (
    REALIZATIONS,
    VACUUM,
    FieldTerm,
    FockState,
    Mode,
    ModeSystem,
    StateSum,
    alpha,
    apply_mode,
    basis_operator,
    basis_states,
    dhat_operator,
    dual_decomposition_check,
    field_mode,
    graded_character,
    locality_check,
    psi_reduction,
    realization,
    singular_check,
    virasoro_check,
    weyl_dim,
)

H = Fraction(1, 2)
seeds = st.integers(0, 10**6)
names = st.sampled_from(REALIZATIONS)


def state(*modes):
    return StateSum.basis(FockState(tuple((m, 1) for m in modes)))


def create(system, modes):
    v = StateSum.vacuum()
    for m in reversed(modes):
        v = apply_mode(system, m, v)
    return v


@pytest.fixture(scope="module")
def dplus():
    return realization("Fl-dplus", 1)


# ---------------------------------------------------------------------------
# mode algebra


def test_vacuum_conditions(dplus):
    sysm = dplus.system
    assert apply_mode(sysm, Mode("psi+", 1, H), StateSum.vacuum()).is_zero()
    assert apply_mode(sysm, Mode("psi-", 1, 3 * H), StateSum.vacuum()).is_zero()


def test_fermion_square(dplus):
    sysm = dplus.system
    m = Mode("psi+", 1, -H)
    assert apply_mode(sysm, m, apply_mode(sysm, m, StateSum.vacuum())).is_zero()


def test_ghost_contraction():
    """With [gamma+_m, gamma-_n] = delta: gamma+_{1/2} gamma-_{-1/2}|0> = |0>
    and gamma-_{1/2} gamma+_{-1/2}|0> = -|0>."""
    sysm = realization("F-l-o2l", 1).system
    v = apply_mode(sysm, Mode("gamma-", 1, -H), StateSum.vacuum())
    assert apply_mode(sysm, Mode("gamma+", 1, H), v) == StateSum.vacuum()
    w = apply_mode(sysm, Mode("gamma+", 1, -H), StateSum.vacuum())
    assert apply_mode(sysm, Mode("gamma-", 1, H), w) == StateSum.vacuum() * -1


def test_neutral_zero_mode_square():
    """The twisted Z-moded phi has phi_0^2 = 1/2."""
    sysm = realization("Fl+1/2-spin", 0).system
    z = Mode("phi", 0, 0)
    assert apply_mode(sysm, z, apply_mode(sysm, z, StateSum.vacuum())) == StateSum.vacuum() * H


def _random_state(sysm, rng, cutoff=2):
    states = basis_states(sysm, cutoff)
    v = StateSum()
    for _ in range(3):
        v = v + StateSum.basis(rng.choice(states)) * rng.randint(-3, 3)
    return v


def _random_mode(sysm, rng, bound=2):
    gens = list(sysm.generators)
    g = rng.choice(gens)
    return rng.choice(sysm.modes_of(g.name, g.color, bound))


@settings(max_examples=60, deadline=None)
@given(names, seeds)
def test_mode_relations(name, seed):
    """[x, y]_+- v = kappa delta v for every pair of modes."""
    sysm = realization(name, 1).system
    rng = random.Random(seed)
    x, y = _random_mode(sysm, rng), _random_mode(sysm, rng)
    v = _random_state(sysm, rng)
    xy = apply_mode(sysm, x, apply_mode(sysm, y, v))
    yx = apply_mode(sysm, y, apply_mode(sysm, x, v))
    both_fermions = sysm.is_fermion(x) and sysm.is_fermion(y)
    lhs = xy + yx if both_fermions else xy - yx
    partner, kappa = sysm.partner(x)
    want = v * kappa if partner == y else StateSum()
    assert lhs == want


def test_state_json_round_trip(dplus):
    v = create(dplus.system, [Mode("psi+", 1, -3 * H), Mode("psi-", 1, -H)]) * Fraction(-2, 3)
    assert StateSum.from_json(v.to_json()) == v


# ---------------------------------------------------------------------------
# field modes


def test_energy_operator_on_vacuum(dplus):
    assert field_mode(dplus, 1, 0)(StateSum.vacuum()).is_zero()


def test_energy_operator_on_one_fermion(dplus):
    v = state(Mode("psi+", 1, -3 * H))
    assert field_mode(dplus, 1, 0)(v) == v * Fraction(3, 2)


def test_alpha_one():
    """alpha_1 is the x-coefficient of tanh(x/4), per unit l."""
    for name in ("Fl-sp", "F-l-o2l"):
        for l in (1, 2, 3):
            r = realization(name, l)
            assert alpha(r, 1) * 1 == Fraction(1, 4)


def test_field_mode_rejects_even(dplus):
    with pytest.raises(ValueError):
        field_mode(dplus, 2, 0)


@pytest.mark.parametrize("name", REALIZATIONS)
def test_field_route_matches_composite(name):
    r = realization(name, 1)
    states = basis_states(r.system, 2)
    for n in (1, 3):
        for k in (-1, 0, 1, 2):
            A, B = basis_operator(r, n, k), field_mode(r, n, k)
            for st_ in states:
                v = StateSum.basis(st_)
                assert A(v) == B(v), (n, k, st_)


@settings(max_examples=30, deadline=None)
@given(names, st.sampled_from([1, 3]), st.integers(-2, 2), seeds)
def test_energy_bookkeeping(name, n, k, seed):
    r = realization(name, 1)
    rng = random.Random(seed)
    st_ = rng.choice(basis_states(r.system, 2))
    out = field_mode(r, n, k)(StateSum.basis(st_))
    assert all(s.energy == st_.energy - k for s, _ in out.items())


@settings(max_examples=25, deadline=None)
@given(names, seeds)
def test_homomorphism_on_states(name, seed):
    """rho([a, b]) = [rho(a), rho(b)] including the central term."""
    r = realization(name, 1)
    rng = random.Random(seed)
    a = random_member(rng, r.sign, maxdeg=3, maxk=2, nterms=2)
    b = random_member(rng, r.sign, maxdeg=3, maxk=2, nterms=2)
    A, B, AB = dhat_operator(r, a), dhat_operator(r, b), dhat_operator(r, bracket(a, b))
    for st_ in basis_states(r.system, 2):
        v = StateSum.basis(st_)
        assert AB(v) == A(B(v)) - B(A(v))


def test_central_element_acts_by_charge():
    for name in ("Fl-dplus", "F-l-cd", "Fl-sp"):
        r = realization(name, 2)
        C = dhat_operator(r, DOp.C(1))
        v = StateSum.vacuum()
        assert C(v) == v * r.central


@pytest.mark.parametrize("name", ["Fl-dplus", "Fl+1/2-dplus", "F-l-cd"])
def test_translation(name):
    """[W^1_{-1}, W^n_k] = -(n+k) W^n_{k-1} on states below the cutoff.

    Only realizations whose fields use the shift-zero basis; the shifted basis
    of the b-tilde system obeys a different translation rule.
    """
    r = realization(name, 1)
    L = field_mode(r, 1, -1)
    for n in (1, 3):
        for k in (-1, 0, 1, 2):
            Wk, Wk1 = field_mode(r, n, k), field_mode(r, n, k - 1)
            for st_ in basis_states(r.system, 2):
                v = StateSum.basis(st_)
                assert L(Wk(v)) - Wk(L(v)) == Wk1(v) * -(n + k)


# ---------------------------------------------------------------------------
# Virasoro, locality, reduction


@pytest.mark.parametrize(
    "name,l,c",
    [("Fl-dplus", 1, 1), ("F-l-o2l", 1, -1), ("Fl+1/2-spin", 0, H), ("Fl-sp", 2, 2), ("F-l+1/2-ospd", 1, -H)],
)
def test_virasoro_central_charge(name, l, c):
    rep = virasoro_check(realization(name, l), 3)
    assert rep["ok"] and not rep["mismatches"]
    assert Fraction(rep["central_charge"]) == Fraction(rep["expected"]) == c


def test_locality_small(dplus):
    assert locality_check(dplus, 1, 1, 3)
    assert locality_check(dplus, 1, 3, 3)


def test_locality_mutants(dplus):
    """Flipping the argument or the derivative order breaks locality."""
    wrong_arg = {1: [FieldTerm(H, "psi-", 1, 1, "psi+", -1, 0), FieldTerm(H, "psi+", 1, 1, "psi-", -1, 0)]}
    assert not locality_check(dplus, 1, 1, 3, fields=wrong_arg)
    wrong_deriv = {1: [FieldTerm(H, "psi-", 1, 3, "psi+", 1, 0), FieldTerm(H, "psi+", 1, 1, "psi-", 1, 0)]}
    assert not locality_check(dplus, 1, 1, 3, fields=wrong_deriv)


def test_locality_needs_dplus():
    with pytest.raises(ValueError):
        locality_check(realization("Fl-sp", 1), 1, 1, 2)


def test_psi_reduction_examples():
    assert psi_reduction(0, 1) == {0: -2}
    assert psi_reduction(0, 0) == {}
    for m in range(5):
        for n in range(5 - m):
            assert psi_reduction(m, n) == {i: -c for i, c in psi_reduction(n, m).items()}


# ---------------------------------------------------------------------------
# characters and duality


def _product(factors, cutoff):
    """prod (1 + z^ch q^e) over the given (e, ch) pairs as a bigraded table."""
    acc = {(Fraction(0), ()): 1}
    for e, ch in factors:
        new = dict(acc)
        for (e0, c0), v in acc.items():
            if e0 + e <= cutoff:
                key = (e0 + e, tuple(a + b for a, b in zip(c0, ch)) if c0 else ch)
                new[key] = new.get(key, 0) + v
        acc = new
    return acc


def test_character_one_pair():
    sysm = ModeSystem.build("fermion", 1)
    cutoff = 2
    factors = []
    for n in range(1, 3):
        factors += [(n - H, (Fraction(1),)), (n - H, (Fraction(-1),))]
    want = {(e, ch if ch else (Fraction(0),)): v for (e, ch), v in _product(factors, cutoff).items()}
    got = graded_character(sysm, cutoff).terms
    assert got == want


def test_character_empty():
    ch = graded_character(ModeSystem.build(None, 0), 5)
    assert ch.specialize() == QSeries.one(5)


def test_character_neutral_fermion():
    sysm = ModeSystem.build(None, 0, neutral="phi")
    cutoff = 3
    want = QSeries.one(cutoff)
    for n in range(1, 4):
        want = want * (QSeries.one(cutoff) + QSeries.monomial(n - H, cutoff))
    assert graded_character(sysm, cutoff).specialize() == want


def test_weyl_dims():
    for m in range(6):
        assert weyl_dim("Sp(2)", (m,)) == m + 1
        assert weyl_dim("SO(3)", (m,)) == 2 * m + 1
    assert weyl_dim("SO(4)", (1, 1)) + weyl_dim("SO(4)", (1, -1)) == 6
    assert weyl_dim("O(4)", (1, 1)) == 6
    assert weyl_dim("Sp(4)", (1, 0)) == 4


def test_weyl_dim_non_dominant():
    with pytest.raises(ValueError):
        weyl_dim("Sp(4)", (0, 1))


def test_duality_sp2():
    rep = dual_decomposition_check("Sp2l-dminus", 1, 8)
    assert rep["equal"] and rep["first_mismatch"] is None


def test_duality_o2_summands():
    rep = dual_decomposition_check("O2l-dplus", 1, 6)
    assert rep["equal"]
    twists = {(tuple(s["lambda"]), s["twist"]) for s in rep["summands"]}
    assert ((0,), "") in twists and ((0,), "det") in twists


def test_duality_degenerate():
    for pair in ("Sp2l-dminus", "O2l-dplus", "O2l1-dplus"):
        assert dual_decomposition_check(pair, 0, 6)["equal"]


@pytest.mark.parametrize("pair,l,cutoff", [("Sp2l-dplus", 1, 6), ("O2l1-dplus", 1, 5), ("Pin2l-dminus", 1, 5),
                                           ("O2l-cminus", 1, 5), ("O2l1-cminus", 1, 4), ("Sp2l-dminus", 2, 6),
                                           ("O2l-dplus", 2, 6)])
def test_duality_pairs(pair, l, cutoff):
    assert dual_decomposition_check(pair, l, cutoff)["equal"]


def test_duality_kernel_flags():
    rep = dual_decomposition_check("Sp2l-dplus", 1, 5)
    assert rep["method"] == "kernel"
    assert rep["multiplicity_free"]
    for s in rep["summands"]:
        assert s["lowest_multiplicity"] == 1
        assert Fraction(s["lowest_energy"]) == Fraction(s["lambda"][0]) / 2


def test_duality_rejects_osp():
    with pytest.raises(ValueError):
        dual_decomposition_check("osp", 1, 3)


# ---------------------------------------------------------------------------
# singular vectors


def test_singular_examples(dplus):
    sysm = dplus.system
    assert singular_check(dplus, StateSum.vacuum())
    v = create(sysm, [Mode("psi+", 1, -H), Mode("psi-", 1, -H)])
    assert singular_check(dplus, v)
    w = create(sysm, [Mode("psi+", 1, -3 * H), Mode("psi-", 1, -H)])
    assert not singular_check(dplus, w)

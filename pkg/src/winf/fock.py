"""Graded Fock spaces of free fields and the W-infinity actions on them.

The engine works with monomial bases: a state is an ordered product of
creation modes applied to the vacuum, and every mode acts exactly through
its (anti)commutation relations.  Two independent routes produce the
action of the subalgebras ``D^-`` / ``D^+``:

* the *composite* route pushes an element through ``hat phi_s`` into a
  classical infinite matrix algebra and lets the matrix units act through
  the bilinear generating functions of the free fields;
* the *field* route evaluates the modes of the normal-ordered bilinear
  fields ``W^n(z)`` / ``T^n(z)`` directly.

The checks (Virasoro, locality, dual pairs, singular vectors) are built on
top of these.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .dhat import DOp, basis_element, membership, virasoro
from .exact import Number, Poly, QSeries, rat, rat_str
from .glhat import central_correction
from .qchar import FundWeightSum, qchar

__all__ = [
    "Generator",
    "ModeSystem",
    "Mode",
    "FockState",
    "StateSum",
    "ModeOperator",
    "Realization",
    "REALIZATIONS",
    "realization",
    "apply_mode",
    "bilinear",
    "dhat_operator",
    "field_mode",
    "field_terms",
    "alpha",
    "virasoro_check",
    "locality_check",
    "psi_reduction",
    "psi_field_mode",
    "Bigraded",
    "basis_states",
    "graded_character",
    "weyl_dim",
    "weyl_character",
    "DUAL_PAIRS",
    "dual_decomposition_check",
    "singular_check",
]

HALF = Fraction(1, 2)

# ---------------------------------------------------------------------------
# mode systems
# ---------------------------------------------------------------------------

_FIELD_ORDER = {"psi+": 0, "psi-": 1, "gamma+": 2, "gamma-": 3, "phi": 4, "chi": 5}


@dataclass(frozen=True)
class Generator:
    """One free field: statistics, flavor, color and moding.

    ``twisted`` marks the neutral fermion whose relations carry the sign
    ``(-1)^m``.
    """

    statistics: str  # "fermion" | "boson"
    flavor: str  # "pair+" | "pair-" | "neutral-phi" | "neutral-chi"
    color: int
    moding: str  # "half" (Z + 1/2) | "int" (Z)
    twisted: bool = False

    @property
    def name(self) -> str:
        if self.flavor == "neutral-phi":
            return "phi"
        if self.flavor == "neutral-chi":
            return "chi"
        base = "psi" if self.statistics == "fermion" else "gamma"
        return base + self.flavor[-1]


@dataclass(frozen=True, order=True)
class Mode:
    """The mode ``X_index`` of the field named ``field`` of a given color."""

    field: str
    color: int
    index: Fraction

    def __post_init__(self):
        object.__setattr__(self, "index", rat(self.index))
        object.__setattr__(self, "_hash", hash((self.field, self.color, self.index)))

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        c = "" if self.field in ("phi", "chi") else f"^{self.color}"
        return f"{self.field}{c}_{rat_str(self.index)}"


@dataclass(frozen=True)
class ModeSystem:
    generators: Tuple[Generator, ...]

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        info = {}
        for g in gens:
            key = (g.name, g.color)
            if key in info:
                raise ValueError(f"generator {key} appears twice")
            if g.statistics not in ("fermion", "boson") or g.moding not in ("half", "int"):
                raise ValueError(f"malformed generator {g}")
            info[key] = g
        neutral = [g for g in gens if g.flavor.startswith("neutral")]
        if len(neutral) > 1:
            raise ValueError("at most one neutral field is supported")
        for g in gens:
            if g.flavor in ("pair+", "pair-"):
                other = g.name[:-1] + ("-" if g.name[-1] == "+" else "+")
                mate = info.get((other, g.color))
                if mate is None or mate.moding != g.moding:
                    raise ValueError(f"pair field {g.name} of color {g.color} has no partner")
            if g.flavor == "neutral-chi" and (g.statistics != "boson" or g.moding != "half"):
                raise ValueError("chi is a bosonic Z+1/2-moded field")
            if g.flavor == "neutral-phi" and g.statistics != "fermion":
                raise ValueError("phi is fermionic")
        object.__setattr__(self, "_info", info)
        colors = sorted({g.color for g in gens if g.flavor.startswith("pair")})
        object.__setattr__(self, "_colors", tuple(colors))
        object.__setattr__(self, "_hash", hash(gens))

    def __hash__(self) -> int:
        return self._hash

    @classmethod
    def build(
        cls,
        pairs: Optional[str],
        l: int,
        pair_moding: str = "half",
        neutral: Optional[str] = None,
        neutral_moding: str = "half",
        twisted: bool = False,
    ) -> "ModeSystem":
        """``l`` pairs (``"fermion"`` or ``"ghost"``) plus an optional
        neutral field ``"phi"`` or ``"chi"``."""
        gens: List[Generator] = []
        if l < 0:
            raise ValueError("l must be >= 0")
        if pairs is not None:
            stat = {"fermion": "fermion", "ghost": "boson"}[pairs]
            for p in range(1, l + 1):
                gens.append(Generator(stat, "pair+", p, pair_moding))
                gens.append(Generator(stat, "pair-", p, pair_moding))
        if neutral == "phi":
            gens.append(Generator("fermion", "neutral-phi", 0, neutral_moding, twisted))
        elif neutral == "chi":
            gens.append(Generator("boson", "neutral-chi", 0, "half"))
        elif neutral is not None:
            raise ValueError(f"unknown neutral field {neutral!r}")
        return cls(tuple(gens))

    # basic data ---------------------------------------------------------
    @property
    def colors(self) -> Tuple[int, ...]:
        return self._colors

    @property
    def rank(self) -> int:
        return len(self._colors)

    def generator(self, name: str, color: int = 0) -> Generator:
        try:
            return self._info[(name, color)]
        except KeyError:
            raise ValueError(f"field {name} of color {color} is not in the system") from None

    def has(self, name: str) -> bool:
        return any(k[0] == name for k in self._info)

    def offset(self, name: str, color: int = 0) -> Fraction:
        """``d`` in ``X(z) = sum X_n z^(-n-d)``: 1/2 for Z+1/2 moding, 0 for Z."""
        return HALF if self.generator(name, color).moding == "half" else Fraction(0)

    def is_fermion(self, mode: Mode) -> bool:
        return mode.field in ("psi+", "psi-", "phi")

    def check_mode(self, mode: Mode) -> None:
        g = self.generator(mode.field, mode.color)
        idx = rat(mode.index)
        if (idx - self.offset(mode.field, mode.color)).denominator != 1:
            raise ValueError(f"mode {mode} has the wrong moding")
        if g.moding == "int" and idx.denominator != 1:
            raise ValueError(f"mode {mode} has the wrong moding")

    def is_annihilator(self, mode: Mode) -> bool:
        g = self.generator(mode.field, mode.color)
        n = mode.index
        if g.moding == "half":
            return n > 0
        if mode.field == "psi+":
            return n >= 0
        return n >= 1

    def partner(self, mode: Mode) -> Tuple[Mode, int]:
        """The unique mode ``Y`` with ``[mode, Y] != 0`` and the value."""
        f, c, n = mode.field, mode.color, mode.index
        if f == "psi+":
            return Mode("psi-", c, -n), 1
        if f == "psi-":
            return Mode("psi+", c, -n), 1
        if f == "gamma+":
            return Mode("gamma-", c, -n), 1
        if f == "gamma-":
            return Mode("gamma+", c, -n), -1
        if f == "phi":
            g = self.generator("phi", 0)
            sign = (-1) ** int(n) if g.twisted else 1
            return Mode("phi", 0, -n), sign
        if f == "chi":
            return Mode("chi", 0, -n), (-1) ** int(n + HALF)
        raise ValueError(f"unknown field {f}")

    def self_square(self, mode: Mode) -> Optional[Fraction]:
        """``X^2`` for a fermionic zero mode that is its own partner."""
        if mode.field == "phi" and mode.index == 0:
            return Fraction(self.partner(mode)[1], 2)
        return None

    @staticmethod
    def order_key(mode: Mode):
        return (_FIELD_ORDER[mode.field], mode.color, mode.index)

    def charge(self, mode: Mode) -> Tuple[int, ...]:
        out = [0] * self.rank
        if mode.field in ("phi", "chi"):
            return tuple(out)
        pos = self._colors.index(mode.color)
        out[pos] = 1 if mode.field.endswith("+") else -1
        return tuple(out)

    def vacuum_charge(self) -> Tuple[Fraction, ...]:
        """``epsilon = 1/2`` per Z-moded pair (the normal ordering constant)."""
        return tuple(
            HALF if self.generator(self._pair_names()[0], p).moding == "int" else Fraction(0) for p in self._colors
        )

    def _pair_names(self) -> Tuple[str, str]:
        return ("psi+", "psi-") if self.has("psi+") else ("gamma+", "gamma-")

    def modes_of(self, name: str, color: int, bound: Number) -> List[Mode]:
        """All modes ``X_n`` with ``|n| <= bound``."""
        d = self.offset(name, color)
        b = rat(bound)
        start = -int(b) - 1
        out = []
        for k in range(start, int(b) + 2):
            n = k + d
            if abs(n) <= b:
                out.append(Mode(name, color, n))
        return out

    def creators(self, max_energy: Number) -> List[Mode]:
        """Creation modes of energy ``<= max_energy`` in canonical order."""
        e = rat(max_energy)
        out = []
        for (name, color), g in self._info.items():
            for m in self.modes_of(name, color, e):
                if not self.is_annihilator(m) and -m.index <= e:
                    out.append(m)
        return sorted(out, key=self.order_key)

    def to_json(self) -> dict:
        return {
            "generators": [
                {
                    "statistics": g.statistics,
                    "flavor": g.flavor,
                    "color": g.color,
                    "moding": "Z+1/2" if g.moding == "half" else "Z",
                    "twisted": g.twisted,
                }
                for g in self.generators
            ]
        }


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FockState:
    """``c_1^{k_1} ... c_r^{k_r} |0>`` with creators in canonical order."""

    modes: Tuple[Tuple[Mode, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(self.modes))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        return isinstance(other, FockState) and self._hash == other._hash and self.modes == other.modes

    @property
    def energy(self) -> Fraction:
        try:
            return self._energy
        except AttributeError:
            e = sum((-m.index * k for m, k in self.modes), Fraction(0))
            object.__setattr__(self, "_energy", e)
            return e

    def charge(self, system: ModeSystem) -> Tuple[Fraction, ...]:
        out = list(system.vacuum_charge())
        for m, k in self.modes:
            for i, v in enumerate(system.charge(m)):
                out[i] += v * k
        return tuple(out)

    def fermion_parity(self, system: ModeSystem) -> int:
        return sum(k for m, k in self.modes if system.is_fermion(m)) % 2

    def __repr__(self) -> str:
        if not self.modes:
            return "|0>"
        parts = []
        for m, k in self.modes:
            parts.append(repr(m) + (f"^{k}" if k > 1 else ""))
        return " ".join(parts) + " |0>"

    def to_json(self) -> list:
        return [[m.field, m.color, rat_str(m.index), k] for m, k in self.modes]

    @classmethod
    def from_json(cls, data) -> "FockState":
        return cls(tuple((Mode(f, int(c), rat(n)), int(k)) for f, c, n, k in data))


VACUUM = FockState()


class StateSum:
    """Finite linear combination of :class:`FockState` (no zero entries)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[FockState, Number]] = None):
        out: Dict[FockState, Fraction] = {}
        for st, c in (terms or {}).items():
            c = rat(c)
            if c:
                out[st] = out.get(st, Fraction(0)) + c
                if not out[st]:
                    del out[st]
        self.terms = out

    @classmethod
    def basis(cls, st: FockState) -> "StateSum":
        return cls({st: 1})

    @classmethod
    def vacuum(cls) -> "StateSum":
        return cls({VACUUM: 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def items(self):
        return self.terms.items()

    def __add__(self, other: "StateSum") -> "StateSum":
        out = dict(self.terms)
        for st, c in other.terms.items():
            v = out.get(st, Fraction(0)) + c
            if v:
                out[st] = v
            else:
                out.pop(st, None)
        res = StateSum()
        res.terms = out
        return res

    def __neg__(self) -> "StateSum":
        res = StateSum()
        res.terms = {st: -c for st, c in self.terms.items()}
        return res

    def __sub__(self, other: "StateSum") -> "StateSum":
        return self + (-other)

    def __mul__(self, c: Number) -> "StateSum":
        c = rat(c)
        res = StateSum()
        res.terms = {st: v * c for st, v in self.terms.items()} if c else {}
        return res

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, StateSum) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def max_energy(self) -> Fraction:
        return max((st.energy for st in self.terms), default=Fraction(0))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = [f"{rat_str(c)}*{st!r}" for st, c in sorted(self.terms.items(), key=lambda t: repr(t[0]))]
        return " + ".join(parts)

    def to_json(self) -> list:
        rows = [[st.to_json(), rat_str(c)] for st, c in self.terms.items()]
        return sorted(rows, key=repr)

    @classmethod
    def from_json(cls, data) -> "StateSum":
        return cls({FockState.from_json(s): rat(c) for s, c in data})


def _apply_basis(system: ModeSystem, mode: Mode, st: FockState) -> List[Tuple[FockState, Number]]:
    items = st.modes
    ferm = system.is_fermion(mode)
    if system.is_annihilator(mode):
        p, kappa = system.partner(mode)
        nf = 0
        for idx, (m, k) in enumerate(items):
            if m == p:
                sign = -1 if (ferm and nf % 2) else 1
                rest = ((m, k - 1),) if k > 1 else ()
                return [(FockState(items[:idx] + rest + items[idx + 1 :]), kappa * k * sign)]
            if system.is_fermion(m):
                nf += k
        return []
    key = system.order_key(mode)
    nf = 0
    pos = len(items)
    for idx, (m, k) in enumerate(items):
        mk = system.order_key(m)
        if mk == key:
            if not ferm:
                return [(FockState(items[:idx] + ((m, k + 1),) + items[idx + 1 :]), 1)]
            sq = system.self_square(mode)
            if sq is None:
                return []
            sign = -1 if nf % 2 else 1
            return [(FockState(items[:idx] + items[idx + 1 :]), sq * sign)]
        if mk > key:
            pos = idx
            break
        if system.is_fermion(m):
            nf += k
    sign = -1 if (ferm and nf % 2) else 1
    return [(FockState(items[:pos] + ((mode, 1),) + items[pos:]), sign)]


def apply_mode(system: ModeSystem, mode: Mode, v: StateSum) -> StateSum:
    """Exact action of a single mode on a finite sum of states."""
    system.check_mode(mode)
    out: Dict[FockState, Fraction] = {}
    for st, c in v.items():
        for st2, c2 in _apply_basis(system, mode, st):
            out[st2] = out.get(st2, Fraction(0)) + c * c2
    return StateSum(out)


_VEV_CACHE: Dict[Tuple[ModeSystem, Mode, Mode], Fraction] = {}


def _vev(system: ModeSystem, x: Mode, y: Mode) -> Fraction:
    """``<0| x y |0>``."""
    key = (system, x, y)
    got = _VEV_CACHE.get(key)
    if got is None:
        got = _VEV_CACHE[key] = _vev_raw(system, x, y)
    return got


def _vev_raw(system: ModeSystem, x: Mode, y: Mode) -> Fraction:
    if system.is_annihilator(y):
        return Fraction(0)
    first = _apply_basis(system, y, VACUUM)
    total = Fraction(0)
    for st, c in first:
        for st2, c2 in _apply_basis(system, x, st):
            if st2 == VACUUM:
                total += c * c2
    return total


def _may_act(system: ModeSystem, x: Mode, y: Mode, present) -> bool:
    """Cheap necessary condition for ``:x y:`` to be nonzero on a state whose
    creators are ``present``: each annihilator needs its partner there."""
    for m in (x, y):
        if system.is_annihilator(m) and system.partner(m)[0] not in present:
            return False
    return True


def _present(st: FockState) -> set:
    return {m for m, _ in st.modes}


def _bilinear_basis(system: ModeSystem, x: Mode, y: Mode, st: FockState) -> Dict[FockState, Fraction]:
    """``:x y:`` on a basis state, with ``:x y: = x y - <0|x y|0>``."""
    out: Dict[FockState, Fraction] = {}
    for st1, c1 in _apply_basis(system, y, st):
        for st2, c2 in _apply_basis(system, x, st1):
            out[st2] = out.get(st2, 0) + c1 * c2
    ev = _vev(system, x, y)
    if ev:
        out[st] = out.get(st, 0) - ev
    return {k: v for k, v in out.items() if v}


def bilinear(system: ModeSystem, x: Mode, y: Mode, v: StateSum) -> StateSum:
    """Normal-ordered product ``:x y:`` applied to ``v``."""
    out = StateSum()
    for st, c in v.items():
        out = out + StateSum(_bilinear_basis(system, x, y, st)) * c
    return out


class ModeOperator:
    """A linear operator given by its action on basis states (memoized).

    ``weight`` is the amount by which it lowers the energy (``k`` for the
    ``k``-th Fourier mode), or ``None`` if unknown.
    """

    def __init__(self, system: ModeSystem, on_basis: Callable[[FockState], Dict[FockState, Fraction]], weight=None, label: str = ""):
        self.system = system
        self._on_basis = on_basis
        self._cache: Dict[FockState, Dict[FockState, Fraction]] = {}
        self.weight = weight
        self.label = label

    def basis_image(self, st: FockState) -> Dict[FockState, Fraction]:
        got = self._cache.get(st)
        if got is None:
            got = self._on_basis(st)
            self._cache[st] = got
        return got

    def apply(self, v: StateSum) -> StateSum:
        out: Dict[FockState, Fraction] = {}
        for st, c in v.items():
            for st2, c2 in self.basis_image(st).items():
                out[st2] = out.get(st2, Fraction(0)) + c * c2
        return StateSum(out)

    __call__ = apply

    def __repr__(self) -> str:
        return f"ModeOperator({self.label})"


def _combine(system, ops: Sequence[Tuple[Fraction, "ModeOperator"]], label="") -> ModeOperator:
    def on_basis(st):
        out: Dict[FockState, Fraction] = {}
        for c, op in ops:
            for st2, c2 in op.basis_image(st).items():
                out[st2] = out.get(st2, Fraction(0)) + c * c2
        return {k: v for k, v in out.items() if v}

    return ModeOperator(system, on_basis, label=label)


class BilinearOperator(ModeOperator):
    """``sum c_xy :x y: + const`` for a (possibly infinite) family of
    bilinears of fixed weight.

    ``generate(bound)`` lists the terms whose mode indices are at most
    ``bound`` in absolute value.  The terms are indexed by the creator that
    must be present for them to act, so a basis state only visits the
    handful of terms that can be nonzero on it.
    """

    def __init__(self, system, generate, kmax, const, weight=None, label=""):
        super().__init__(system, self._act, weight=weight, label=label)
        self._generate = generate
        self._kmax = rat(kmax)
        self._const = rat(const)
        self._bound = Fraction(-1)
        self._free: List[Tuple[Mode, Mode, Fraction]] = []
        self._keyed: Dict[Mode, List[Tuple[Mode, Mode, Fraction]]] = {}

    def _compile(self, bound: Fraction) -> None:
        bound = max(bound, 2 * self._bound, Fraction(4))
        free, keyed = [], {}
        sysm = self.system
        for (x, y), c in self._generate(bound).items():
            if not c:
                continue
            ann = [m for m in (y, x) if sysm.is_annihilator(m)]
            if ann:
                keyed.setdefault(sysm.partner(ann[0])[0], []).append((x, y, c))
            else:
                free.append((x, y, c))
        self._free, self._keyed, self._bound = free, keyed, bound

    def terms(self, bound: Number) -> Dict[Tuple[Mode, Mode], Fraction]:
        """The bilinear coefficients with mode indices bounded by ``bound``."""
        return {k: v for k, v in self._generate(rat(bound)).items() if v}

    def _act(self, st: FockState) -> Dict[FockState, Fraction]:
        need = st.energy + self._kmax + 2
        if need > self._bound:
            self._compile(need)
        sysm = self.system
        out: Dict[FockState, Fraction] = {}
        groups = [self._free] + [self._keyed.get(m, ()) for m, _ in st.modes]
        for group in groups:
            for x, y, c in group:
                for st2, c2 in _bilinear_basis(sysm, x, y, st).items():
                    out[st2] = out.get(st2, Fraction(0)) + c * c2
        if self._const:
            out[st] = out.get(st, Fraction(0)) + self._const
        return {a: v for a, v in out.items() if v}


# ---------------------------------------------------------------------------
# realizations
# ---------------------------------------------------------------------------

# classical algebra: (partner of (i, j), sign function, z-exponent shift, neutral variable sign)
_ALGEBRAS = {
    # e_ij = E_ij - (-1)^(i+j) E_{1-j,1-i}, generating function z^(i-1) w^(-j)
    "c": (lambda i, j: (1 - j, 1 - i), lambda i, j: -((-1) ** ((i + j) % 2)), 1, -1),
    # e_ij = E_ij - (-1)^(i+j) E_{-j,-i}, generating function z^i w^(-j)
    "b-": (lambda i, j: (-j, -i), lambda i, j: -((-1) ** ((i + j) % 2)), 0, -1),
    # e_ij = E_ij - E_{1-j,1-i}
    "d": (lambda i, j: (1 - j, 1 - i), lambda i, j: -1, 1, 1),
    # e_ij = E_ij - E_{-j,-i}
    "b+": (lambda i, j: (-j, -i), lambda i, j: -1, 0, 1),
}


@dataclass(frozen=True)
class FieldTerm:
    """``coef * :d^nx[X(sx z)] d^ny[Y(sy z)]:`` summed over colors when
    ``color`` is ``None`` (pair fields) or for the neutral field."""

    coef: Fraction
    x: str
    sx: int
    nx: int
    y: str
    sy: int
    ny: int


@dataclass(frozen=True)
class Realization:
    """A Fock space together with the data defining the subalgebra action.

    ``algebra`` is the classical algebra the matrix units land in, ``s``
    the parameter of ``hat phi_s`` and ``basis`` the distinguished basis
    (``T`` for ``D^-``, ``W`` for ``D^+``) with its parameter.
    """

    name: str
    l: int
    system: ModeSystem
    sign: str
    algebra: str
    s: Fraction
    central: Fraction
    basis: str
    basis_s: Fraction
    group: str
    field_spec: Tuple[str, ...] = ()

    @property
    def b(self) -> int:
        return 0 if self.sign == "-" else -1

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "l": self.l,
            "sign": self.sign,
            "algebra": self.algebra,
            "s": rat_str(self.s),
            "central_charge": rat_str(self.central),
            "basis": self.basis,
            "group": self.group,
            "system": self.system.to_json(),
        }


def _real_table():
    # name: (pairs, pair moding, neutral, neutral moding, twisted, sign, algebra, s,
    #        central(l), basis, basis_s, group)
    h = HALF
    return {
        "Fl-sp": ("fermion", "half", None, "half", False, "-", "c", h, lambda l: Fraction(l), "T", h, "Sp(2l)"),
        "Fl-pin": ("fermion", "int", None, "half", False, "-", "b-", Fraction(0), lambda l: Fraction(l), "T", Fraction(0), "Pin(2l)"),
        "F-l-o2l": ("ghost", "half", None, "half", False, "-", "c", h, lambda l: Fraction(-l), "T", h, "O(2l)"),
        "F-l-1/2": ("ghost", "half", "chi", "half", False, "-", "c", h, lambda l: -l - h, "T", h, "O(2l+1)"),
        "Fl-1/2-osp": ("fermion", "half", "chi", "half", False, "-", "c", h, lambda l: l - h, "T", h, "osp(1,2l)"),
        "Fl+1/2-spin": ("fermion", "int", "phi", "int", True, "-", "b-", Fraction(0), lambda l: l + h, "T", Fraction(0), "Spin(2l+1)"),
        "Fl-dplus": ("fermion", "half", None, "half", False, "+", "d", Fraction(0), lambda l: Fraction(l), "W", Fraction(0), "O(2l)"),
        "Fl-btilde": ("fermion", "int", None, "half", False, "+", "b+", -h, lambda l: Fraction(l), "W", h, "Pin(2l)"),
        "Fl+1/2-dplus": ("fermion", "half", "phi", "half", False, "+", "d", Fraction(0), lambda l: l + h, "W", Fraction(0), "O(2l+1)"),
        "F-l-cd": ("ghost", "half", None, "half", False, "+", "d", Fraction(0), lambda l: Fraction(-l), "W", Fraction(0), "Sp(2l)"),
        "F-l+1/2-ospd": ("ghost", "half", "phi", "half", False, "+", "d", Fraction(0), lambda l: -l + h, "W", Fraction(0), "osp(1,2l)"),
    }


_TABLE = _real_table()
REALIZATIONS: Tuple[str, ...] = tuple(_TABLE)

_ALIASES = {
    "F-l-1/2": ["F−l−½", "F-l-½"],
    "Fl-1/2-osp": ["Fl−½-osp", "Fl-½-osp"],
    "Fl+1/2-spin": ["Fl+½-spin"],
    "Fl+1/2-dplus": ["Fl+½-dplus"],
    "F-l-o2l": ["F−l-o2l"],
    "F-l-cd": ["F−l-cd"],
    "F-l+1/2-ospd": ["F−l+½-ospd", "F-l+½-ospd"],
}
_ALIAS = {a: k for k, vs in _ALIASES.items() for a in vs}


def _canonical_name(name: str) -> str:
    name = _ALIAS.get(name, name)
    if name not in _TABLE:
        raise ValueError(f"unknown realization {name!r}; choose from {', '.join(REALIZATIONS)}")
    return name


_REAL_CACHE: Dict[Tuple[str, int], Realization] = {}


def realization(name: str, l: int) -> Realization:
    """The realization ``name`` built on ``l`` pairs of fields."""
    name = _canonical_name(name)
    if l < 0:
        raise ValueError("l must be >= 0")
    key = (name, l)
    if key not in _REAL_CACHE:
        pairs, pm, neutral, nm, tw, sign, alg, s, cen, basis, bs, group = _TABLE[name]
        system = ModeSystem.build(pairs, l, pm, neutral, nm, tw)
        _REAL_CACHE[key] = Realization(name, l, system, sign, alg, rat(s), rat(cen(l)), basis, rat(bs), group)
    return _REAL_CACHE[key]


# composite route -----------------------------------------------------------


def _gl_terms(r: Realization, i: int, j: int) -> List[Tuple[Fraction, Mode, Mode]]:
    """Bilinears representing the matrix unit ``E_ij`` on the pair fields."""
    out = []
    sysm = r.system
    for p in sysm.colors:
        g = sysm.generator(sysm._pair_names()[0], p)
        if g.statistics == "fermion":
            if g.moding == "half":
                out.append((Fraction(1), Mode("psi+", p, HALF - i), Mode("psi-", p, j - HALF)))
            else:
                out.append((Fraction(1), Mode("psi+", p, Fraction(-i)), Mode("psi-", p, Fraction(j))))
        else:
            out.append((Fraction(-1), Mode("gamma+", p, HALF - i), Mode("gamma-", p, j - HALF)))
    return out


def _neutral_name(sysm: ModeSystem) -> Optional[str]:
    for name in ("phi", "chi"):
        if sysm.has(name):
            return name
    return None


_E_CACHE: Dict[Tuple[str, int, int, int], List[Tuple[Fraction, Mode, Mode]]] = {}


def e_terms(r: Realization, i: int, j: int) -> List[Tuple[Fraction, Mode, Mode]]:
    """Bilinears representing the generator ``e_ij`` of the classical algebra."""
    key = (r.name, r.l, i, j)
    got = _E_CACHE.get(key)
    if got is None:
        got = _E_CACHE[key] = _e_terms_raw(r, i, j)
    return got


def _e_terms_raw(r: Realization, i: int, j: int) -> List[Tuple[Fraction, Mode, Mode]]:
    partner, sgn, zshift, nsig = _ALGEBRAS[r.algebra]
    i2, j2 = partner(i, j)
    out = list(_gl_terms(r, i, j))
    out += [(c * sgn(i, j), x, y) for c, x, y in _gl_terms(r, i2, j2)]
    name = _neutral_name(r.system)
    if name is not None:
        d = r.system.offset(name)
        P = i - zshift
        a = -P - d
        b = j - d
        out.append((Fraction(nsig ** (j % 2)), Mode(name, 0, a), Mode(name, 0, b)))
    return out


def _check_member(r: Realization, a: DOp):
    if not membership(r.sign, r.b, a.noncentral()):
        raise ValueError(f"element is not in D^{r.sign}; the realization {r.name} only carries that subalgebra")


def dhat_operator(r: Realization, a: DOp) -> ModeOperator:
    """``rho(hat phi_s(a))``: the composite action of ``a`` on the Fock space."""
    _check_member(r, a)
    sysm = r.system
    const = rat(a.central)
    if 0 in a.terms:
        const -= central_correction(r.s, 0, a.terms[0])[0]
    const *= r.central
    terms = dict(a.terms)
    kmax = max((abs(k) for k in terms), default=0)

    def generate(bound: Fraction) -> Dict[Tuple[Mode, Mode], Fraction]:
        out: Dict[Tuple[Mode, Mode], Fraction] = {}
        jb = int(bound) + kmax + 3
        for k, f in terms.items():
            for j in range(-jb, jb + 1):
                coef = None
                for c, x, y in e_terms(r, j - k, j):
                    if abs(x.index) > bound or abs(y.index) > bound:
                        continue
                    if coef is None:
                        coef = f(r.s - j) / 2
                    if coef:
                        out[(x, y)] = out.get((x, y), Fraction(0)) + coef * c
        return out

    weight = next(iter(terms)) if len(terms) == 1 else None
    return BilinearOperator(sysm, generate, kmax, const, weight=weight, label=f"rho({a!r})")


# field route ---------------------------------------------------------------


def alpha(r: Realization, n: int) -> Fraction:
    """``alpha_n`` per unit central charge: ``hat phi(X_0) = phi(X_0) - alpha_n c``
    for the weight-zero basis element ``X_0`` of degree ``n``."""
    x0 = basis_element(r.basis, n, r.basis_s, 0)
    return central_correction(r.s, 0, x0.terms.get(0, Poly()))[0]


def field_terms(r: Realization, n: int) -> List[FieldTerm]:
    """Normal-ordered bilinears whose modes give ``W^n`` / ``T^n``."""
    h, one = HALF, Fraction(1)
    name = r.name
    F = FieldTerm
    if name in ("Fl-dplus", "Fl-btilde", "Fl+1/2-dplus"):
        out = [F(h, "psi-", 1, n, "psi+", 1, 0), F(h, "psi+", 1, n, "psi-", 1, 0)]
        if name == "Fl+1/2-dplus":
            out.append(F(h, "phi", 1, n, "phi", 1, 0))
        return out
    if name in ("F-l-cd", "F-l+1/2-ospd"):
        out = [F(-h, "gamma+", 1, n, "gamma-", 1, 0), F(h, "gamma+", 1, 0, "gamma-", 1, n)]
        if name == "F-l+1/2-ospd":
            out.append(F(h, "phi", 1, n, "phi", 1, 0))
        return out
    if name in ("Fl-sp", "Fl-1/2-osp"):
        out = [F(-one, "psi+", 1, 0, "psi-", 1, n), F(-one, "psi+", -1, n, "psi-", -1, 0)]
        if name == "Fl-1/2-osp":
            out.append(F(-one, "chi", 1, 0, "chi", -1, n))
        return out
    if name in ("F-l-o2l", "F-l-1/2"):
        out = [F(one, "gamma+", 1, 0, "gamma-", 1, n), F(one, "gamma+", -1, n, "gamma-", -1, 0)]
        if name == "F-l-1/2":
            out.append(F(-one, "chi", 1, 0, "chi", -1, n))
        return out
    if name in ("Fl-pin", "Fl+1/2-spin"):
        out = [F(-one, "psi+", 1, 0, "psi-", 1, n), F(one, "psi+", -1, n, "psi-", -1, 0)]
        if name == "Fl+1/2-spin":
            out.append(F(-one, "phi", 1, 0, "phi", -1, n))
        return out
    raise ValueError(f"no field formula for {name}")


def _ff(x: Fraction, n: int) -> Fraction:
    out = Fraction(1)
    for i in range(n):
        out *= x - i
    return out


def _sigma_pow(s: int, e: Fraction) -> int:
    if s == 1:
        return 1
    if e.denominator != 1:
        raise ValueError("non-integral exponent in a (-z) substitution")
    return -1 if int(e) % 2 else 1


def _field_term_modes(sysm: ModeSystem, t: FieldTerm, color: int, k: Fraction, bound: Fraction):
    """The mode expansion of the ``k``-th Fourier mode of one field term."""
    cx = color if t.x not in ("phi", "chi") else 0
    cy = color if t.y not in ("phi", "chi") else 0
    dx, dy = sysm.offset(t.x, cx), sysm.offset(t.y, cy)
    for xm in sysm.modes_of(t.x, cx, bound):
        a = xm.index
        b = k - a
        if abs(b) > bound:
            continue
        ym = Mode(t.y, cy, b)
        ex, ey = -a - dx, -b - dy
        coef = t.coef * _sigma_pow(t.sx, ex) * _ff(ex, t.nx) * _sigma_pow(t.sy, ey) * _ff(ey, t.ny)
        if coef:
            yield coef, xm, ym


def _terms_operator(sysm: ModeSystem, terms: Sequence[FieldTerm], k: Number, const: Fraction, label: str) -> ModeOperator:
    k = rat(k)
    pair_colors = sysm.colors

    def generate(bound: Fraction) -> Dict[Tuple[Mode, Mode], Fraction]:
        out: Dict[Tuple[Mode, Mode], Fraction] = {}
        for t in terms:
            neutral = t.x in ("phi", "chi")
            for color in ([0] if neutral else pair_colors):
                for coef, xm, ym in _field_term_modes(sysm, t, color, k, bound):
                    out[(xm, ym)] = out.get((xm, ym), Fraction(0)) + coef
        return out

    return BilinearOperator(sysm, generate, abs(k), const, weight=k, label=label)


def field_mode(r: Realization, n: int, k: int) -> ModeOperator:
    """The ``k``-th mode of ``W^n(z)`` (``D^+``) or ``T^n(z)`` (``D^-``)."""
    if n < 1 or n % 2 == 0:
        raise ValueError("n must be a positive odd integer")
    const = -alpha(r, n) * r.central if k == 0 else Fraction(0)
    return _terms_operator(r.system, field_terms(r, n), k, const, f"{r.basis}^{n}_{k}")


def basis_operator(r: Realization, n: int, k: int) -> ModeOperator:
    """Composite-route image of the distinguished basis element."""
    return dhat_operator(r, basis_element(r.basis, n, r.basis_s, k))


# ---------------------------------------------------------------------------
# state enumeration and characters
# ---------------------------------------------------------------------------


def basis_states(system: ModeSystem, cutoff: Number) -> List[FockState]:
    """All monomial basis states of energy ``<= cutoff``."""
    cut = rat(cutoff)
    creators = system.creators(cut)
    out: List[FockState] = []

    def rec(idx: int, budget: Fraction, acc: List[Tuple[Mode, int]]):
        if idx == len(creators):
            out.append(FockState(tuple(acc)))
            return
        m = creators[idx]
        e = -m.index
        rec(idx + 1, budget, acc)
        if system.is_fermion(m):
            if e <= budget:
                acc.append((m, 1))
                rec(idx + 1, budget - e, acc)
                acc.pop()
            return
        k = 1
        while k * e <= budget:
            acc.append((m, k))
            rec(idx + 1, budget - k * e, acc)
            acc.pop()
            k += 1

    rec(0, cut, [])
    return sorted(out, key=lambda s: (s.energy, repr(s)))


class Bigraded:
    """Exact table ``(energy, charge vector) -> multiplicity`` up to ``cutoff``."""

    def __init__(self, terms: Mapping[Tuple[Fraction, Tuple[Fraction, ...]], Number], cutoff: Number, rank: int):
        self.cutoff = rat(cutoff)
        self.rank = rank
        t: Dict[Tuple[Fraction, Tuple[Fraction, ...]], Fraction] = {}
        for (e, ch), c in terms.items():
            e = rat(e)
            if e > self.cutoff:
                continue
            key = (e, tuple(rat(x) for x in ch))
            v = t.get(key, Fraction(0)) + rat(c)
            if v:
                t[key] = v
            else:
                t.pop(key, None)
        self.terms = t

    def specialize(self) -> QSeries:
        """``z_i -> 1``."""
        acc: Dict[Fraction, Fraction] = {}
        for (e, _), c in self.terms.items():
            acc[e] = acc.get(e, Fraction(0)) + c
        return QSeries.from_dict(acc, self.cutoff)

    def __add__(self, other: "Bigraded") -> "Bigraded":
        cut = min(self.cutoff, other.cutoff)
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t.get(k, Fraction(0)) + c
        return Bigraded(t, cut, self.rank)

    def __eq__(self, other) -> bool:
        return isinstance(other, Bigraded) and self.first_mismatch(other) is None

    def first_mismatch(self, other: "Bigraded") -> Optional[Fraction]:
        cut = min(self.cutoff, other.cutoff)
        keys = {k for k in itertools.chain(self.terms, other.terms) if k[0] <= cut}
        bad = [k[0] for k in keys if self.terms.get(k, 0) != other.terms.get(k, 0)]
        return min(bad) if bad else None

    def to_json(self) -> list:
        rows = sorted(self.terms.items(), key=lambda t: (t[0][0], t[0][1]))
        return [[rat_str(e), [rat_str(x) for x in ch], rat_str(c)] for (e, ch), c in rows]

    def __repr__(self) -> str:
        return f"Bigraded({self.to_json()})"


def _as_system(obj) -> ModeSystem:
    return obj.system if isinstance(obj, Realization) else obj


def graded_character(obj, cutoff: Number, torus_rank: Optional[int] = None) -> Bigraded:
    """Energy and charge bigraded character of a Fock space.

    ``torus_rank`` keeps only the first that many charges (default: all).
    """
    system = _as_system(obj)
    rank = system.rank if torus_rank is None else torus_rank
    if not 0 <= rank <= system.rank:
        raise ValueError("torus rank exceeds the number of pairs")
    acc: Dict[Tuple[Fraction, Tuple[Fraction, ...]], int] = {}
    for st in basis_states(system, cutoff):
        key = (st.energy, st.charge(system)[:rank])
        acc[key] = acc.get(key, 0) + 1
    return Bigraded(acc, cutoff, rank)


# ---------------------------------------------------------------------------
# Virasoro and locality
# ---------------------------------------------------------------------------


def _virasoro_element(r: Realization, m: int) -> DOp:
    if r.sign == "+":
        return virasoro(m)
    if m % 2:
        raise ValueError("D^- contains the Virasoro modes of even index only")
    out = DOp({m: Poly([Fraction(-m, 2), -1])})
    if m == 0:
        out = out + DOp.C(Fraction(1, 8))
    return out


def _commutator(a: ModeOperator, b: ModeOperator, v: StateSum) -> StateSum:
    return a.apply(b.apply(v)) - b.apply(a.apply(v))


def virasoro_check(r: Realization, cutoff: Number, modes: Optional[Sequence[int]] = None) -> dict:
    """Evaluate ``[L_m, L_n] - (m-n) L_{m+n}`` on every basis state of energy
    ``<= cutoff`` and solve for the central charge.

    For ``D^+`` realizations ``L_m = W^1_m`` (``|m| <= 3``); ``D^-`` only
    contains ``-t^m (D + m/2)`` for even ``m`` and the constant ``+C/8``
    makes them satisfy the same relation.
    """
    if rat(cutoff) < 2:
        raise ValueError("cutoff must be >= 2")
    if modes is None:
        modes = [m for m in range(-3, 4) if r.sign == "+" or m % 2 == 0]
    ops: Dict[int, ModeOperator] = {}

    def L(m):
        if m not in ops:
            ops[m] = dhat_operator(r, _virasoro_element(r, m))
        return ops[m]

    states = basis_states(r.system, cutoff)
    estimates = set()
    mismatches = []
    for m in modes:
        for n in modes:
            if n <= m:
                continue
            for st in states:
                v = StateSum.basis(st)
                lhs = _commutator(L(m), L(n), v) - L(m + n).apply(v) * (m - n)
                if m + n != 0 or m**3 == m:
                    if lhs:
                        mismatches.append([m, n, repr(st)])
                    continue
                kappa = Fraction(m**3 - m, 12)
                rest = lhs - v * (lhs.terms.get(st, Fraction(0)))
                if rest:
                    mismatches.append([m, n, repr(st)])
                    continue
                estimates.add(lhs.terms.get(st, Fraction(0)) / kappa)
    consistent = len(estimates) == 1 and not mismatches
    c = next(iter(estimates)) if len(estimates) == 1 else None
    return {
        "realization": r.name,
        "l": r.l,
        "cutoff": rat_str(rat(cutoff)),
        "central_charge": rat_str(c) if c is not None else None,
        "expected": rat_str(r.central),
        "ok": consistent and c == r.central,
        "mismatches": mismatches[:10],
    }


def _kappa(system: ModeSystem, u: Mode, v: Mode) -> int:
    """Supercommutator ``[u, v]`` of two modes (a scalar)."""
    p, k = system.partner(u)
    return k if p == v else 0


def _canonical_pair(system: ModeSystem, u: Mode, v: Mode) -> Optional[Tuple[Tuple[Mode, Mode], int]]:
    ferm = system.is_fermion(u)
    if u == v:
        return None if ferm else ((u, v), 1)
    if system.order_key(u) > system.order_key(v):
        return (v, u), (-1 if ferm else 1)
    return (u, v), 1


def canonical_bilinears(system: ModeSystem, terms: Mapping[Tuple[Mode, Mode], Number]) -> Dict[Tuple[Mode, Mode], Fraction]:
    """Rewrite ``sum c :x y:`` with each unordered pair appearing once."""
    out: Dict[Tuple[Mode, Mode], Fraction] = {}
    for (x, y), c in terms.items():
        got = _canonical_pair(system, x, y)
        if got is None:
            continue
        key, sgn = got
        out[key] = out.get(key, Fraction(0)) + sgn * rat(c)
    return {k: v for k, v in out.items() if v}


def bilinear_commutator(system: ModeSystem, A: Mapping, B: Mapping) -> Dict[Tuple[Mode, Mode], Fraction]:
    """Bilinear part of ``[sum a :x1 y1:, sum b :x2 y2:]`` (single contractions).

    The constant part is a c-number and is obtained separately from the
    vacuum expectation value.
    """
    index: Dict[Mode, List[Tuple[Mode, Mode, Fraction]]] = {}
    for (x2, y2), c2 in B.items():
        index.setdefault(x2, []).append((x2, y2, c2))
        if y2 != x2:
            index.setdefault(y2, []).append((x2, y2, c2))
    acc: Dict[Tuple[Mode, Mode], Fraction] = {}

    def add(u, v, c):
        got = _canonical_pair(system, u, v)
        if got is not None and c:
            key, sgn = got
            acc[key] = acc.get(key, Fraction(0)) + sgn * c

    for (x1, y1), c1 in A.items():
        seen = set()
        for u in (x1, y1):
            p = system.partner(u)[0]
            for x2, y2, c2 in index.get(p, ()):
                if (x2, y2) in seen:
                    continue
                seen.add((x2, y2))
                c = c1 * c2
                s12 = -1 if (system.is_fermion(y1) and system.is_fermion(x2)) else 1
                t12 = -1 if (system.is_fermion(x1) and system.is_fermion(x2)) else 1
                add(x1, y2, c * _kappa(system, y1, x2))
                add(x1, x2, c * s12 * _kappa(system, y1, y2))
                add(y2, y1, c * _kappa(system, x1, x2))
                add(x2, y1, c * t12 * _kappa(system, x1, y2))
    return {k: v for k, v in acc.items() if v}


def _vacuum_commutator(a: ModeOperator, b: ModeOperator) -> Fraction:
    v = StateSum.vacuum()
    return _commutator(a, b, v).terms.get(VACUUM, Fraction(0))


def locality_check(
    r: Realization,
    m: int,
    n: int,
    cutoff: Number,
    fields: Optional[Mapping[int, Sequence[FieldTerm]]] = None,
) -> bool:
    """``(z-w)^(m+n+2) [W^m(z), W^n(w)] = 0`` as an identity in the modes.

    In modes: ``sum_r (-1)^r C(N, r) [W^m_{a-r}, W^n_{b+r}] = 0`` for all
    ``|a|, |b| <= cutoff``.  Each commutator of normal-ordered bilinears is
    computed exactly (bilinear part by contraction, constant by the vacuum
    expectation value) and compared on all bilinears with mode indices up
    to ``cutoff``.  ``fields`` may replace the bilinears defining a given
    degree (mutation tests).
    """
    if r.sign != "+":
        raise ValueError("locality of W^n(z) is stated for D^+ realizations")
    cut = rat(cutoff)
    W = int(cut)
    N = m + n + 2
    sysm = r.system
    cache: Dict[Tuple[int, int], BilinearOperator] = {}

    def mode(deg, k):
        key = (deg, k)
        if key not in cache:
            if fields is not None and deg in fields:
                const = -alpha(r, deg) * r.central if k == 0 else Fraction(0)
                cache[key] = _terms_operator(sysm, fields[deg], k, const, f"mutant^{deg}_{k}")
            else:
                cache[key] = field_mode(r, deg, k)
        return cache[key]

    big = cut + 2 * W + N + 3
    tables: Dict[Tuple[int, int], Dict] = {}

    def table(deg, k):
        key = (deg, k)
        if key not in tables:
            tables[key] = mode(deg, k).terms(big)
        return tables[key]

    for a in range(-W, W + 1):
        for b in range(-W, W + 1):
            acc: Dict[Tuple[Mode, Mode], Fraction] = {}
            const = Fraction(0)
            for rr in range(N + 1):
                w = (-1) ** rr * comb(N, rr)
                com = bilinear_commutator(sysm, table(m, a - rr), table(n, b + rr))
                for key, c in com.items():
                    acc[key] = acc.get(key, Fraction(0)) + w * c
                if a + b == 0:
                    const += w * _vacuum_commutator(mode(m, a - rr), mode(n, b + rr))
            if const:
                return False
            for (x, y), c in acc.items():
                if c and abs(x.index) <= cut and abs(y.index) <= cut:
                    return False
    return True


# ---------------------------------------------------------------------------
# Psi^{m,n} reduction
# ---------------------------------------------------------------------------


def _solve_exact(A: List[List[Fraction]], b: List[Fraction]) -> Optional[List[Fraction]]:
    """Least-structure exact solve; returns ``None`` if inconsistent."""
    rows, cols = len(A), len(A[0]) if A else 0
    M = [list(A[i]) + [b[i]] for i in range(rows)]
    piv_cols = []
    r0 = 0
    for c in range(cols):
        p = next((i for i in range(r0, rows) if M[i][c]), None)
        if p is None:
            continue
        M[r0], M[p] = M[p], M[r0]
        inv = 1 / M[r0][c]
        M[r0] = [x * inv for x in M[r0]]
        for i in range(rows):
            if i != r0 and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r0])]
        piv_cols.append(c)
        r0 += 1
    for i in range(r0, rows):
        if M[i][cols]:
            return None
    sol = [Fraction(0)] * cols
    for i, c in enumerate(piv_cols):
        sol[c] = M[i][cols]
    return sol


def _psi_vector(N: int, a: int, coef: Fraction, acc: Dict[int, Fraction]):
    """Add ``coef * Psi^{a, N-a}`` using ``Psi^{a,b} = -Psi^{b,a}``."""
    b = N - a
    if a == b:
        return
    if a > b:
        acc[a] = acc.get(a, Fraction(0)) + coef
    else:
        acc[b] = acc.get(b, Fraction(0)) - coef


def psi_reduction(m: int, n: int) -> Dict[int, Fraction]:
    """Coefficients ``c_i`` with ``Psi^{m,n} = sum_i c_i d^i W^{m+n-i}``.

    Uses ``W^j = Psi^{j,0} / 2`` (odd ``j``), ``d Psi^{a,b} = Psi^{a+1,b} +
    Psi^{a,b+1}`` and the antisymmetry; the system is solved exactly in the
    basis ``Psi^{a, N-a}``, ``a > N/2``.
    """
    if m < 0 or n < 0:
        raise ValueError("m and n must be >= 0")
    N = m + n
    target: Dict[int, Fraction] = {}
    _psi_vector(N, m, Fraction(1), target)
    idx = [i for i in range(N + 1) if (N - i) % 2 == 1]
    cols = []
    for i in idx:
        vec: Dict[int, Fraction] = {}
        for r in range(i + 1):
            _psi_vector(N, N - i + r, Fraction(comb(i, r), 2), vec)
        cols.append(vec)
    keys = sorted(set(target) | {k for c in cols for k in c})
    if not keys:
        return {}
    A = [[c.get(k, Fraction(0)) for c in cols] for k in keys]
    bvec = [target.get(k, Fraction(0)) for k in keys]
    sol = _solve_exact(A, bvec)
    if sol is None:
        raise ArithmeticError(f"Psi^({m},{n}) is not in the span of the d^i W^j")
    return {i: c for i, c in zip(idx, sol) if c}


def psi_field_mode(r: Realization, m: int, n: int, k: int) -> ModeOperator:
    """The ``k``-th mode of ``Psi^{m,n}(z)`` on a fermionic ``D^+`` Fock space."""
    if r.name not in ("Fl-dplus",):
        raise ValueError("Psi^{m,n} is defined on the Z+1/2-moded fermion pairs")
    F = FieldTerm
    terms = [F(Fraction(1), "psi+", 1, m, "psi-", 1, n), F(Fraction(1), "psi-", 1, m, "psi+", 1, n)]
    return _terms_operator(r.system, terms, k, Fraction(0), f"Psi^({m},{n})_{k}")


# ---------------------------------------------------------------------------
# Weyl characters
# ---------------------------------------------------------------------------


def _parse_group(group: str) -> Tuple[str, int]:
    g = group.replace(" ", "")
    for prefix in ("Sp", "SO", "O", "Pin", "Spin"):
        if g.startswith(prefix + "(") and g.endswith(")"):
            n = int(g[len(prefix) + 1 : -1])
            return prefix, n
    raise ValueError(f"unknown group {group!r}")


def _roots(kind: str, l: int) -> List[Tuple[Fraction, ...]]:
    out = []
    for i in range(l):
        for j in range(i + 1, l):
            for sgn in (-1, 1):
                v = [Fraction(0)] * l
                v[i] = Fraction(1)
                v[j] = Fraction(sgn)
                out.append(tuple(v))
        if kind in ("B", "C"):
            v = [Fraction(0)] * l
            v[i] = Fraction(1 if kind == "B" else 2)
            out.append(tuple(v))
    return out


def _rho(kind: str, l: int) -> Tuple[Fraction, ...]:
    if kind == "C":
        return tuple(Fraction(l - i) for i in range(l))
    if kind == "B":
        return tuple(Fraction(2 * (l - i) - 1, 2) for i in range(l))
    return tuple(Fraction(l - 1 - i) for i in range(l))


def _check_dominant(kind: str, lam: Sequence[Fraction]):
    l = len(lam)
    for i in range(l - 1):
        if lam[i] < lam[i + 1]:
            raise ValueError(f"weight {list(map(str, lam))} is not dominant")
    if l == 0:
        return
    if kind == "D":
        if l >= 2 and lam[l - 2] < abs(lam[l - 1]):
            raise ValueError("weight is not dominant")
        halves = [x.denominator for x in lam]
    else:
        if lam[-1] < 0:
            raise ValueError("weight is not dominant")
        halves = [x.denominator for x in lam]
    if kind == "C" and any(d != 1 for d in halves):
        raise ValueError("Sp weights are integral")
    if len(set(halves)) > 1 or any(d > 2 for d in halves):
        raise ValueError("weight must be all integral or all half-odd-integral")


def _dot(a, b) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _weyl_dim_kind(kind: str, lam: Sequence[Fraction]) -> int:
    l = len(lam)
    lam = tuple(rat(x) for x in lam)
    _check_dominant(kind, lam)
    rho = _rho(kind, l)
    lr = tuple(a + b for a, b in zip(lam, rho))
    num, den = Fraction(1), Fraction(1)
    for a in _roots(kind, l):
        num *= _dot(lr, a)
        den *= _dot(rho, a)
    d = num / den
    if d.denominator != 1:
        raise ArithmeticError("non-integral dimension")
    return int(d)


def _group_kind(prefix: str, n: int) -> Tuple[str, int]:
    if prefix == "Sp":
        if n % 2:
            raise ValueError("Sp(n) needs even n")
        return "C", n // 2
    if n % 2:
        return "B", n // 2
    return "D", n // 2


def weyl_dim(group: str, lam: Sequence[Number], det: bool = False) -> int:
    """Dimension of an irreducible representation.

    ``Sp(2l)``, ``SO(n)`` and ``Spin(n)`` use the Weyl product formula.
    ``O(2l)`` with ``lam_l > 0`` is the induced module (both signs of
    ``lam_l``); ``O(n)`` with ``det`` or ``lam_l = 0`` restricts to a single
    ``SO(n)`` module.  ``Pin(2l)`` takes ``lam = 1/2 + (m_1, ..., m_l)`` and
    is the sum of the two spin modules.
    """
    prefix, n = _parse_group(group)
    kind, l = _group_kind(prefix, n)
    lam = tuple(rat(x) for x in lam)
    if len(lam) != l:
        raise ValueError(f"{group} needs a weight with {l} entries")
    if prefix in ("Sp", "SO", "Spin"):
        if prefix == "SO" and any(x.denominator != 1 for x in lam):
            raise ValueError("SO weights are integral")
        return _weyl_dim_kind(kind, lam)
    if prefix == "O":
        if any(x.denominator != 1 or x < 0 for x in lam):
            raise ValueError("O(n) labels are nonnegative integers")
        if kind == "D" and l and lam[-1] > 0:
            if det:
                raise ValueError("the induced O(2l) module has no det twist")
            return 2 * _weyl_dim_kind(kind, lam)
        return _weyl_dim_kind(kind, lam)
    if prefix == "Pin":
        if kind != "D":
            raise ValueError("Pin(n) is handled for even n")
        if any(x.denominator != 2 for x in lam) or (l and lam[-1] < 0):
            raise ValueError("Pin(2l) weights are 1/2 + nonnegative integers")
        flipped = lam[:-1] + (-lam[-1],)
        return _weyl_dim_kind(kind, lam) + _weyl_dim_kind(kind, flipped)
    raise ValueError(f"unsupported group {group!r}")


Laurent = Dict[Tuple[Fraction, ...], int]


def _weyl_group(kind: str, l: int) -> Iterator[Tuple[Tuple[int, ...], Tuple[int, ...], int]]:
    """Signed permutations ``(perm, signs, sgn)`` of the Weyl group."""
    for perm in itertools.permutations(range(l)):
        inv = sum(1 for i in range(l) for j in range(i + 1, l) if perm[i] > perm[j])
        psign = -1 if inv % 2 else 1
        for signs in itertools.product((1, -1), repeat=l):
            neg = sum(1 for s in signs if s < 0)
            if kind == "D" and neg % 2:
                continue
            sgn = psign * (-1 if (neg % 2 and kind != "D") else 1)
            yield perm, signs, sgn


def _alternant(kind: str, mu: Tuple[Fraction, ...]) -> Laurent:
    l = len(mu)
    out: Laurent = {}
    for perm, signs, sgn in _weyl_group(kind, l):
        w = tuple(signs[i] * mu[perm[i]] for i in range(l))
        out[w] = out.get(w, 0) + sgn
    return {k: v for k, v in out.items() if v}


def _laurent_divide(num: Laurent, den: Laurent) -> Laurent:
    rem = dict(num)
    q: Laurent = {}
    lead = max(den)
    lc = den[lead]
    guard = 0
    while rem:
        guard += 1
        if guard > 100000:
            raise ArithmeticError("division did not terminate")
        top = max(rem)
        c = Fraction(rem[top], lc)
        if c.denominator != 1:
            raise ArithmeticError("inexact division")
        shift = tuple(a - b for a, b in zip(top, lead))
        q[shift] = q.get(shift, 0) + int(c)
        for mon, v in den.items():
            key = tuple(a + b for a, b in zip(mon, shift))
            nv = rem.get(key, 0) - int(c) * v
            if nv:
                rem[key] = nv
            else:
                rem.pop(key, None)
    return {k: v for k, v in q.items() if v}


def _weyl_character_kind(kind: str, lam: Sequence[Fraction]) -> Laurent:
    lam = tuple(rat(x) for x in lam)
    l = len(lam)
    if l == 0:
        return {(): 1}
    _check_dominant(kind, lam)
    rho = _rho(kind, l)
    num = _alternant(kind, tuple(a + b for a, b in zip(lam, rho)))
    den = _alternant(kind, rho)
    return _laurent_divide(num, den)


def weyl_character(group: str, lam: Sequence[Number], det: bool = False) -> Laurent:
    """Torus character ``{weight: multiplicity}`` in the ``epsilon`` basis
    (the charges of the pairs), with the same conventions as :func:`weyl_dim`."""
    prefix, n = _parse_group(group)
    kind, l = _group_kind(prefix, n)
    lam = tuple(rat(x) for x in lam)
    if len(lam) != l:
        raise ValueError(f"{group} needs a weight with {l} entries")
    if prefix == "O" and kind == "D" and l and lam[-1] > 0:
        a = _weyl_character_kind(kind, lam)
        b = _weyl_character_kind(kind, lam[:-1] + (-lam[-1],))
        return _laurent_add(a, b)
    if prefix == "Pin":
        a = _weyl_character_kind(kind, lam)
        b = _weyl_character_kind(kind, lam[:-1] + (-lam[-1],))
        return _laurent_add(a, b)
    return _weyl_character_kind(kind, lam)


def _laurent_add(a: Laurent, b: Laurent) -> Laurent:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------------------
# dual pairs
# ---------------------------------------------------------------------------

# pair: (realization, group family, method)
DUAL_PAIRS = {
    "Sp2l-dminus": ("Fl-sp", "Sp", "qchar"),
    "O2l-dplus": ("Fl-dplus", "O-even", "qchar"),
    "O2l1-dplus": ("Fl+1/2-dplus", "O-odd", "qchar"),
    "Pin2l-dminus": ("Fl-pin", "Pin", "qchar"),
    "Sp2l-dplus": ("F-l-cd", "Sp", "kernel"),
    "O2l-cminus": ("F-l-o2l", "SO-even", "kernel"),
    "O2l1-cminus": ("F-l-1/2", "SO-odd", "kernel"),
}

_PAIR_ALIASES = {"O2l-cminus": ["O2l-dminus-ghost"], "Sp2l-dplus": ["Sp2l-dplus-ghost"]}


def _partitions(maxpart: int, length: int, maxparts: int) -> Iterator[Tuple[int, ...]]:
    """Partitions with at most ``length`` parts, parts <= maxpart."""

    def rec(prefix, cap, left):
        yield tuple(prefix) + (0,) * (length - len(prefix))
        if left == 0:
            return
        for p in range(1, cap + 1):
            yield from rec(prefix + [p], p, left - 1)

    yield from rec([], maxpart, min(length, maxparts))


def _labels_ij(m: Sequence[int]) -> Tuple[List[int], int, int]:
    big = [x for x in m if x > 1]
    j = sum(1 for x in m if x > 0)
    return big, len(big), j


def _pair_summands(pair: str, l: int, cutoff: Fraction):
    """``(group character, shift, FundWeightSum)`` for the qchar-route pairs."""
    rows = []
    if pair == "Sp2l-dminus":
        for m in _partitions(int(2 * cutoff) + 1, l, l):
            shift = Fraction(sum(x * x for x in m), 2)
            if shift > cutoff:
                continue
            nz = tuple(x for x in m if x > 0)
            ch = weyl_character(f"Sp({2 * l})", m)
            rows.append((m, "", ch, shift, FundWeightSum("c", nz, l - len(nz))))
        return rows
    if pair in ("O2l-dplus", "O2l1-dplus"):
        odd = pair == "O2l1-dplus"
        N = 2 * l + (1 if odd else 0)
        grp = f"O({N})"
        for m in _partitions(int(2 * cutoff) + 1, l, l):
            base = Fraction(sum(x * x for x in m), 2)
            big, i, j = _labels_ij(m)
            if base > cutoff:
                continue
            ch = weyl_character(grp, m) if l else {(): 1}
            if not odd and l and m[-1] > 0:
                n = tuple(big) + (1,) * (l - i)
                rows.append((m, "", ch, base, FundWeightSum("d", n, l - i)))
                continue
            n = tuple(big) + (1,) * (j - i)
            rows.append((m, "", ch, base, FundWeightSum("d", n, N - i - j)))
            if l == 0 and not odd:
                continue
            dshift = base + Fraction(N - 2 * j, 2)
            if dshift <= cutoff:
                n2 = tuple(big) + (1,) * (N - i - j)
                rows.append((m, "det", ch, dshift, FundWeightSum("d", n2, j - i)))
        return rows
    if pair == "Pin2l-dminus":
        if l < 1:
            raise ValueError("Pin(2l) needs l >= 1")
        for m in _partitions(int(2 * cutoff) + 1, l, l):
            shift = Fraction(sum(x * (x + 1) for x in m), 2)
            if shift > cutoff:
                continue
            nz = tuple(x for x in m if x > 0)
            lam = tuple(HALF + x for x in m)
            ch = weyl_character(f"Pin({2 * l})", lam)
            rows.append((m, "", ch, shift, FundWeightSum("b", nz, 2 * l - 2 * len(nz))))
        return rows
    raise ValueError(f"no character formula for {pair}")


def _raising_terms(r: Realization) -> List[Tuple[Tuple[int, ...], List[FieldTerm], Optional[int]]]:
    """Zero modes spanning the positive root spaces of the horizontal group."""
    F = FieldTerm
    one = Fraction(1)
    out = []
    colors = r.system.colors
    if r.name == "F-l-cd":  # sp(2l): e_** (p <= q), e_* (p < q)
        for a, p in enumerate(colors):
            for q in colors[a:]:
                out.append((("gamma+", p), ("gamma+", q), 1))
            for q in colors[a + 1 :]:
                out.append((("gamma+", p), ("gamma-", q), 1))
    elif r.name in ("F-l-o2l", "F-l-1/2"):  # so(n): twisted e_** (p < q), e_* (p < q), e_*^p
        for a, p in enumerate(colors):
            for q in colors[a + 1 :]:
                out.append((("gamma+", p), ("gamma+", q), -1))
                out.append((("gamma+", p), ("gamma-", q), 1))
            if r.name == "F-l-1/2":
                out.append((("gamma+", p), ("chi", 0), 1))
    else:
        raise ValueError(f"no group action recorded for {r.name}")
    ops = []
    for (x, cx), (y, cy), sigma in out:
        ops.append((x, cx, y, cy, sigma))
    return ops


def _raising_operator(r: Realization, x, cx, y, cy, sigma) -> ModeOperator:
    sysm = r.system

    def on_basis(st):
        bound = st.energy + 2
        res: Dict[FockState, Fraction] = {}
        dy = sysm.offset(y, cy)
        for xm in sysm.modes_of(x, cx, bound):
            b = -xm.index
            ym = Mode(y, cy, b)
            coef = Fraction(_sigma_pow(sigma, -b - dy))
            for st2, c2 in _bilinear_basis(sysm, xm, ym, st).items():
                res[st2] = res.get(st2, Fraction(0)) + coef * c2
        return {k: v for k, v in res.items() if v}

    return ModeOperator(sysm, on_basis, weight=0, label=f":{x}{cx}{y}{cy}:(0)")


def _rank(rows: List[Dict[FockState, Fraction]]) -> int:
    pivots: Dict[FockState, Dict[FockState, Fraction]] = {}
    rank = 0
    for row in rows:
        v = dict(row)
        while v:
            key = min(v, key=repr)
            if key in pivots:
                p = pivots[key]
                f = v[key] / p[key]
                for k, c in p.items():
                    nv = v.get(k, Fraction(0)) - f * c
                    if nv:
                        v[k] = nv
                    else:
                        v.pop(k, None)
            else:
                pivots[key] = v
                rank += 1
                break
    return rank


def _kernel_multiplicities(r: Realization, cutoff: Fraction) -> Dict[Tuple[Fraction, ...], Dict[Fraction, int]]:
    """Dimensions of the spaces of highest weight vectors of the horizontal
    group, per dominant weight and energy."""
    sysm = r.system
    ops = [_raising_operator(r, *t) for t in _raising_terms(r)]
    kind = "C" if r.group.startswith("Sp") else ("B" if r.group == "O(2l+1)" else "D")
    blocks: Dict[Tuple[Fraction, Tuple[Fraction, ...]], List[FockState]] = {}
    for st in basis_states(sysm, cutoff):
        blocks.setdefault((st.energy, st.charge(sysm)), []).append(st)
    out: Dict[Tuple[Fraction, ...], Dict[Fraction, int]] = {}
    for (e, ch), states in blocks.items():
        try:
            _check_dominant(kind, ch)
        except ValueError:
            continue
        # kernel of all raising operators on span(states)
        # dim ker = n - rank of the stacked map; columns are the states
        images = []
        for st in states:
            img: Dict[Tuple[int, FockState], Fraction] = {}
            for idx, op in enumerate(ops):
                for st2, c in op.basis_image(st).items():
                    img[(idx, st2)] = c
            images.append(img)
        rk = _rank([{k: v for k, v in im.items()} for im in images]) if images else 0
        dim = len(states) - rk
        if dim:
            out.setdefault(ch, {})[e] = dim
    return out


def _group_name(r: Realization) -> str:
    n = 2 * r.l
    if r.group.startswith("Sp"):
        return f"Sp({n})"
    return f"SO({n + 1})" if r.group == "O(2l+1)" else f"SO({n})"


def dual_decomposition_check(pair: str, l: int, cutoff: Number) -> dict:
    """Compare the bigraded Fock character with the character predicted by
    the duality theorem, up to ``cutoff``.

    Positive central charge pairs use the closed q-characters of the
    classical modules, shifted by the energy of the isotypic highest
    weight vector.  Negative central charge pairs (no closed character
    formula) use the dimensions of the spaces of highest weight vectors of
    the group computed in the Fock space.
    """
    pair = next((k for k, v in _PAIR_ALIASES.items() if pair in v), pair)
    if pair not in DUAL_PAIRS:
        if "osp" in pair.lower():
            raise ValueError("osp(1,2l) pairs are not checked: no dimension formula")
        raise ValueError(f"unknown dual pair {pair!r}")
    name, family, method = DUAL_PAIRS[pair]
    r = realization(name, l)
    cut = rat(cutoff)
    lhs = graded_character(r, cut)
    rhs_terms: Dict[Tuple[Fraction, Tuple[Fraction, ...]], Fraction] = {}
    summands = []
    if method == "qchar":
        for m, tag, ch, shift, w in _pair_summands(pair, l, cut):
            qc = qchar(w, cut - shift)
            for e, c in qc.items():
                for wt, mult in ch.items():
                    key = (e + shift, wt)
                    rhs_terms[key] = rhs_terms.get(key, Fraction(0)) + c * mult
            summands.append(
                {"lambda": list(m), "twist": tag, "shift": rat_str(shift), "weight": w.to_json()}
            )
    else:
        grp = _group_name(r)
        kin = _kernel_multiplicities(r, cut)
        for wt in sorted(kin):
            ch = weyl_character(grp, wt) if l else {(): 1}
            for e, dim in kin[wt].items():
                for wt2, mult in ch.items():
                    key = (e, wt2)
                    rhs_terms[key] = rhs_terms.get(key, Fraction(0)) + dim * mult
            lowest = min(kin[wt])
            summands.append(
                {
                    "lambda": [rat_str(x) for x in wt],
                    "lowest_energy": rat_str(lowest),
                    "lowest_multiplicity": kin[wt][lowest],
                }
            )
    rhs = Bigraded(rhs_terms, cut, lhs.rank)
    mism = lhs.first_mismatch(rhs)
    extra = {}
    if method == "kernel":
        extra["multiplicity_free"] = all(row["lowest_multiplicity"] == 1 for row in summands)
        if family == "SO-even" and l:
            flip = lambda w: w[:-1] + (-w[-1],)
            extra["conjugation_symmetric"] = all(kin.get(flip(w)) == kin[w] for w in kin)
    return {
        "pair": pair,
        "l": l,
        "cutoff": rat_str(cut),
        "method": method,
        "lhs": lhs.to_json(),
        "rhs": rhs.to_json(),
        "equal": mism is None,
        "first_mismatch": rat_str(mism) if mism is not None else None,
        "summands": summands,
        **extra,
    }


# ---------------------------------------------------------------------------
# singular vectors
# ---------------------------------------------------------------------------


def singular_check(r: Realization, vector: StateSum, nmax: Optional[int] = None) -> bool:
    """True iff every ``W^n_k`` / ``T^n_k`` with ``k >= 1`` (odd ``n <=
    nmax``) kills ``vector``.  Modes with ``k`` above the top energy of the
    vector act by zero for degree reasons."""
    if vector.is_zero():
        return True
    top = vector.max_energy()
    if nmax is None:
        nmax = 2 * int(top) + 3
    for n in range(1, nmax + 1, 2):
        for k in range(1, int(top) + 1):
            if basis_operator(r, n, k).apply(vector):
                return False
    return True

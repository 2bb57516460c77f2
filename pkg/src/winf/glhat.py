"""Finite windows of infinite matrices over ``Q[u]/(u^(m+1))`` and the
homomorphisms from the differential-operator algebras into them.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .dhat import DOp, membership
from .exact import Number, Poly, XSeries, analytic_series, rat, rat_str

__all__ = [
    "RmPoly",
    "Window",
    "BoundaryError",
    "window_bracket",
    "window_cocycle",
    "phi",
    "hat_phi",
    "nu_shift",
    "central_correction",
    "hat_phi_correction",
    "correction_generating",
    "classical_membership",
    "labels_from_weight",
]


class BoundaryError(ValueError):
    """An operation would need matrix entries outside the window."""


class RmPoly:
    """Element of ``R_m = Q[u]/(u^(m+1))``."""

    __slots__ = ("m", "coeffs")

    def __init__(self, coeffs: Iterable[Number], m: int):
        if m < 0:
            raise ValueError("m must be >= 0")
        cs = [rat(c) for c in list(coeffs)[: m + 1]]
        cs += [Fraction(0)] * (m + 1 - len(cs))
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("RmPoly is immutable")

    @classmethod
    def zero(cls, m: int) -> "RmPoly":
        return cls([], m)

    @classmethod
    def one(cls, m: int) -> "RmPoly":
        return cls([1], m)

    @classmethod
    def u_power(cls, j: int, m: int, c: Number = 1) -> "RmPoly":
        return cls([0] * j + [c], m)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __getitem__(self, j: int) -> Fraction:
        return self.coeffs[j]

    def _check(self, other: "RmPoly"):
        if other.m != self.m:
            raise ValueError("mixing different truncation orders m")

    def __add__(self, other: "RmPoly") -> "RmPoly":
        if not isinstance(other, RmPoly):
            other = RmPoly([rat(other)], self.m)
        self._check(other)
        return RmPoly((a + b for a, b in zip(self.coeffs, other.coeffs)), self.m)

    __radd__ = __add__

    def __neg__(self) -> "RmPoly":
        return RmPoly((-a for a in self.coeffs), self.m)

    def __sub__(self, other: "RmPoly") -> "RmPoly":
        return self + (-other)

    def __mul__(self, other) -> "RmPoly":
        if not isinstance(other, RmPoly):
            c = rat(other)
            return RmPoly((c * a for a in self.coeffs), self.m)
        self._check(other)
        m = self.m
        out = [Fraction(0)] * (m + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j in range(m + 1 - i):
                    out[i + j] += a * other.coeffs[j]
        return RmPoly(out, m)

    __rmul__ = __mul__

    def reflect(self) -> "RmPoly":
        """``a(u) -> a(-u)``."""
        return RmPoly((c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs)), self.m)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RmPoly):
            return NotImplemented
        return self.m == other.m and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.m, self.coeffs))

    def __repr__(self) -> str:
        return f"RmPoly({Poly(self.coeffs).format('u')}; m={self.m})"

    def to_json(self) -> list:
        return [rat_str(c) for c in self.coeffs]


class Window:
    """Entries ``(i, j)`` with ``|i|, |j| <= N`` of a matrix in ``gl^[m]``
    together with a central coefficient in ``R_m``.

    Only entries inside the window are known; everything an operation
    returns is exact on the (possibly smaller) window it reports.
    """

    __slots__ = ("N", "m", "entries", "central")

    def __init__(self, N: int, m: int, entries: Optional[Mapping[Tuple[int, int], RmPoly]] = None, central: Optional[RmPoly] = None):
        if N < 0:
            raise ValueError("window half-width must be >= 0")
        clean: Dict[Tuple[int, int], RmPoly] = {}
        for (i, j), a in (entries or {}).items():
            if not isinstance(a, RmPoly):
                a = RmPoly([rat(a)], m)
            if a.m != m:
                raise ValueError("entry has the wrong truncation order")
            if abs(i) > N or abs(j) > N:
                raise BoundaryError(f"entry ({i},{j}) lies outside the window N={N}")
            if not a.is_zero():
                clean[(i, j)] = a
        if central is None:
            central = RmPoly.zero(m)
        elif not isinstance(central, RmPoly):
            central = RmPoly([rat(central)], m)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "entries", dict(sorted(clean.items())))
        object.__setattr__(self, "central", central)

    def __setattr__(self, name, value):
        raise AttributeError("Window is immutable")

    @classmethod
    def unit(cls, N: int, m: int, i: int, j: int, c: Number = 1, upow: int = 0) -> "Window":
        """``c u^upow E_ij``."""
        return cls(N, m, {(i, j): RmPoly.u_power(upow, m, c)})

    @property
    def band(self) -> int:
        return max((abs(i - j) for i, j in self.entries), default=0)

    def entry(self, i: int, j: int) -> RmPoly:
        if abs(i) > self.N or abs(j) > self.N:
            raise BoundaryError(f"entry ({i},{j}) lies outside the window N={self.N}")
        return self.entries.get((i, j), RmPoly.zero(self.m))

    def restrict(self, N: int) -> "Window":
        if N > self.N:
            raise BoundaryError("cannot enlarge a window")
        keep = {k: v for k, v in self.entries.items() if abs(k[0]) <= N and abs(k[1]) <= N}
        return Window(N, self.m, keep, self.central)

    def __add__(self, other: "Window") -> "Window":
        if (self.N, self.m) != (other.N, other.m):
            raise ValueError("windows of different shape")
        e = dict(self.entries)
        for k, v in other.entries.items():
            e[k] = e.get(k, RmPoly.zero(self.m)) + v
        return Window(self.N, self.m, e, self.central + other.central)

    def __neg__(self) -> "Window":
        return Window(self.N, self.m, {k: -v for k, v in self.entries.items()}, -self.central)

    def __sub__(self, other: "Window") -> "Window":
        return self + (-other)

    def __mul__(self, c) -> "Window":
        return Window(self.N, self.m, {k: v * c for k, v in self.entries.items()}, self.central * c)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Window):
            return NotImplemented
        return (self.N, self.m, self.entries, self.central) == (other.N, other.m, other.entries, other.central)

    def __hash__(self):
        return hash((self.N, self.m, tuple(self.entries.items()), self.central))

    def __repr__(self) -> str:
        return f"Window(N={self.N}, m={self.m}, {len(self.entries)} entries, central={self.central})"

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "m": self.m,
            "entries": [[i, j, v.to_json()] for (i, j), v in self.entries.items()],
            "central": self.central.to_json(),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Window":
        m = int(data["m"])
        entries = {}
        for i, j, cs in data.get("entries", []):
            entries[(int(i), int(j))] = RmPoly([rat(c) for c in cs], m)
        central = RmPoly([rat(c) for c in data.get("central", [])], m)
        return cls(int(data["N"]), m, entries, central)


def _J(i: int) -> int:
    return 1 if i <= 0 else 0


def window_cocycle(a: Window, b: Window) -> RmPoly:
    """``Tr([J, A] B)`` with ``J = sum_{i <= 0} E_ii``."""
    total = RmPoly.zero(a.m)
    for (i, j), x in a.entries.items():
        d = _J(i) - _J(j)
        if d:
            y = b.entries.get((j, i))
            if y is not None:
                total = total + x * y * d
    return total


def window_bracket(a: Window, b: Window) -> Window:
    """Commutator plus cocycle.

    The result lives on the window shrunk by the larger bandwidth, where
    every entry of the products is determined by the inputs.  The cocycle
    needs the entries straddling the index 0, so ``band(a) + band(b)``
    must not exceed ``N``.
    """
    if (a.N, a.m) != (b.N, b.m):
        raise ValueError("windows of different shape")
    ba, bb = a.band, b.band
    if ba + bb > a.N:
        raise BoundaryError(f"bandwidths {ba}+{bb} exceed the window half-width {a.N}")
    N2 = a.N - max(ba, bb)
    rows_b: Dict[int, List[Tuple[int, RmPoly]]] = {}
    for (k, j), y in b.entries.items():
        rows_b.setdefault(k, []).append((j, y))
    rows_a: Dict[int, List[Tuple[int, RmPoly]]] = {}
    for (k, j), y in a.entries.items():
        rows_a.setdefault(k, []).append((j, y))
    out: Dict[Tuple[int, int], RmPoly] = {}
    zero = RmPoly.zero(a.m)
    for (i, k), x in a.entries.items():
        if abs(i) > N2:
            continue
        for j, y in rows_b.get(k, ()):
            if abs(j) <= N2:
                out[(i, j)] = out.get((i, j), zero) + x * y
    for (i, k), x in b.entries.items():
        if abs(i) > N2:
            continue
        for j, y in rows_a.get(k, ()):
            if abs(j) <= N2:
                out[(i, j)] = out.get((i, j), zero) - x * y
    return Window(N2, a.m, out, window_cocycle(a, b))


def nu_shift(a: Window) -> Window:
    """``E_ij -> E_{i+1, j+1}``; entries pushed past the edge are dropped
    and the window shrinks by one."""
    if a.N < 1:
        raise BoundaryError("window too small to shift")
    N2 = a.N - 1
    out = {}
    for (i, j), v in a.entries.items():
        if abs(i + 1) <= N2 and abs(j + 1) <= N2:
            out[(i + 1, j + 1)] = v
    return Window(N2, a.m, out, a.central)


# ---------------------------------------------------------------------------
# the homomorphisms phi_s^[m]
# ---------------------------------------------------------------------------

_VARIANTS = {"general": None, "minus": ("-", 0), "plus": ("+", -1)}


def _check_variant(variant: str, a: DOp):
    if variant not in _VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    spec = _VARIANTS[variant]
    if spec is not None and not membership(spec[0], spec[1], a):
        raise ValueError(f"element is not in the {variant} subalgebra")


def phi(s: Number, m: int, variant: str, a: DOp, N: int) -> Window:
    """``t^k f(D) -> sum_j f(-j + s + u) E_{j-k, j}`` on the window.

    The ``minus``/``plus`` variants are the same map restricted to the
    fixed-point subalgebras; they only add a membership check.
    """
    if a.central != 0:
        raise ValueError("phi is defined on central-free elements; use hat_phi")
    _check_variant(variant, a)
    s = rat(s)
    entries: Dict[Tuple[int, int], RmPoly] = {}
    for k, f in a.terms.items():
        for j in range(-N, N + 1):
            if abs(j - k) > N:
                continue
            entries[(j - k, j)] = RmPoly(f.shift(s - j).coeffs, m)
    return Window(N, m, entries)


def _gen_correction(s: Fraction, m: int, order: int) -> List[XSeries]:
    """u-components of ``(exp((s+u)x) - 1)/(exp(x) - 1)`` to ``x^order``."""
    big = order + 1
    den = analytic_series("exp", 1, big) - 1
    esx = analytic_series("exp", s, big)
    out = [(esx - 1) / den]
    for i in range(1, m + 1):
        out.append((esx.shift_x(i) * Fraction(1, factorial(i))) / den)
    return out


def central_correction(s: Number, m: int, f: Poly) -> RmPoly:
    """Constant ``c(f)`` such that ``f(D) -> phi_s(f(D)) - c(f)`` together
    with ``C -> 1`` extends ``phi_s`` to the central extensions."""
    s = rat(s)
    n = max(f.degree, 0)
    gens = _gen_correction(s, m, n)
    out = []
    for g in gens:
        out.append(sum((f.coeff(k) * g[k] * factorial(k) for k in range(f.degree + 1)), Fraction(0)))
    return RmPoly(out, m)


def hat_phi_correction(s: Number, m: int, variant: str, n: int) -> RmPoly:
    """Correction constant attached to the weight-zero basis element of
    degree ``n``: ``D^n`` (general and minus) or ``(D + 1/2)^n`` (plus)."""
    if variant not in _VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if n < 0:
        raise ValueError("n must be >= 0")
    if variant != "general" and n % 2 == 0:
        raise ValueError("the fixed-point subalgebras need odd n")
    base = Poly([Fraction(1, 2), 1]) if variant == "plus" else Poly.x()
    return central_correction(s, m, base**n)


def correction_generating(sign: str, s: Number, m: int, order: int) -> List[XSeries]:
    """The closed generating forms (per power of ``u``) of the corrections
    of ``exp(xD) - exp(-xD)`` (``-``) or ``exp(x(D+1/2)) - exp(-x(D+1/2))``
    (``+``), written through cosh, sinh and the ``eta_j`` functions."""
    s = rat(s)
    big = order + 1
    half = Fraction(1, 2)
    sh = analytic_series("sinh", half, big)
    mu = s - half if sign == "-" else s
    if sign == "-":
        num0 = analytic_series("cosh", mu, big) - analytic_series("cosh", half, big)
    elif sign == "+":
        num0 = analytic_series("cosh", s, big) - 1
    else:
        raise ValueError("sign must be '+' or '-'")
    out = [num0 / sh]
    for j in range(1, m + 1):
        eta = _eta_series(j, mu, big)
        out.append(eta / sh)
    return out


def _eta_series(j: int, mu: Fraction, order: int) -> XSeries:
    """``x^j (exp(mu x) + (-1)^j exp(-mu x)) / (2 j!)``."""
    e = analytic_series("exp", mu, order) + analytic_series("exp", -mu, order) * (-1) ** j
    return e.shift_x(j) * Fraction(1, 2 * factorial(j))


def hat_phi(s: Number, m: int, a: DOp, N: int, variant: str = "general") -> Window:
    """The centrally extended map: ``C -> 1`` and the weight-zero part
    shifted by :func:`central_correction`."""
    _check_variant(variant, a)
    w = phi(s, m, "general", a.noncentral(), N)
    corr = central_correction(s, m, a.component(0)) if 0 in a.terms else RmPoly.zero(m)
    central = RmPoly([a.central], m) - corr
    return Window(w.N, m, w.entries, central)


# ---------------------------------------------------------------------------
# classical subalgebras
# ---------------------------------------------------------------------------

_REFLECTIONS = {
    # kind: (offset, twisted sign)  meaning a_ij(u) = eps a_{o-j, o-i}(-u)
    "b-": (0, True),
    "b+": (0, False),
    "c": (1, True),
    "d": (1, False),
}


def classical_membership(kind: str, a: Window, strict: bool = False) -> bool:
    """Entrywise check of the defining relation of the classical algebra.

    ``b-``: ``a_ij(u) = (-1)^(i+j+1) a_{-j,-i}(-u)``;
    ``b+``: ``a_ij(u) = -a_{-j,-i}(-u)``;
    ``c``: ``a_ij(u) = (-1)^(i+j+1) a_{1-j,1-i}(-u)``;
    ``d``: ``a_ij(u) = -a_{1-j,1-i}(-u)``.

    Entries whose mirror image falls outside the window cannot be checked;
    they are skipped, or raise :class:`BoundaryError` when ``strict``.
    """
    if kind not in _REFLECTIONS:
        raise ValueError(f"unknown classical algebra {kind!r}")
    off, twisted = _REFLECTIONS[kind]
    N = a.N
    for (i, j), v in a.entries.items():
        ri, rj = off - j, off - i
        if abs(ri) > N or abs(rj) > N:
            if strict:
                raise BoundaryError(f"mirror of ({i},{j}) leaves the window")
            continue
        sign = (1 if (i + j) % 2 else -1) if twisted else -1
        if v != a.entry(ri, rj).reflect() * sign:
            return False
    return True


def labels_from_weight(algebra: str, diag: Mapping[int, Iterable[Number]], central: Iterable[Number]) -> dict:
    """Labels of a highest weight from its values on the Cartan subalgebra.

    ``diag[i][j]`` is the label ``lambda_i^(j)`` of the chosen algebra
    (for ``gl`` the value on ``u^j E_ii``; for b, c, d the value on the
    symmetrized diagonal element, with ``diag[0]`` for b holding the odd-``j``
    values of ``2 u^j E_00``).  ``central[j]`` is ``c_j``.  Returns a dict
    with ``c``, ``lambda`` and ``h`` tables (``h[i][j]``).
    """
    cs = [rat(c) for c in central]
    m = len(cs) - 1
    if m < 0:
        cs, m = [Fraction(0)], 0
    lam: Dict[int, List[Fraction]] = {}
    for i, vals in diag.items():
        vals = [rat(v) for v in vals]
        if len(vals) > m + 1:
            raise ValueError("label has more u-powers than the central charges")
        lam[int(i)] = vals + [Fraction(0)] * (m + 1 - len(vals))
    zero = [Fraction(0)] * (m + 1)

    def L(i):
        return lam.get(i, zero)

    h: Dict[int, List[Fraction]] = {}
    if algebra == "gl":
        lo = min(list(lam) + [0]) - 1
        hi = max(list(lam) + [0])
        for i in range(lo, hi + 1):
            h[i] = [L(i)[j] - L(i + 1)[j] + (cs[j] if i == 0 else 0) for j in range(m + 1)]
    elif algebra in ("b", "c", "d"):
        if any(i < 0 for i in lam) or (algebra != "b" and 0 in lam):
            raise ValueError(f"labels of {algebra} are indexed by positive integers")
        hi = max(list(lam) + [1])
        for i in range(1, hi + 1):
            h[i] = [L(i)[j] - L(i + 1)[j] for j in range(m + 1)]
        h0 = []
        for j in range(m + 1):
            if algebra == "b":
                if j % 2 == 0:
                    h0.append(-2 * L(1)[j] + 2 * cs[j])
                else:
                    h0.append(L(0)[j] - L(1)[j] + cs[j])
            elif algebra == "c":
                h0.append(-L(1)[j] + cs[j] if j % 2 == 0 else cs[j])
            else:
                h0.append(-L(1)[j] - L(2)[j] + 2 * cs[j])
        h[0] = h0
        h = dict(sorted(h.items()))
    else:
        raise ValueError(f"unknown algebra {algebra!r}")
    return {"algebra": algebra, "c": cs, "lambda": dict(sorted(lam.items())), "h": h}

"""Highest weights of the twisted algebras: the generating function
``Delta(x)``, exponent spectra, classification and realization data.

A quasifinite highest weight of ``D^-`` (resp. ``D^+``) is encoded by its
central charge ``c`` and the even quasipolynomial

    F(x) = 2 Delta(x) sinh(x/2),     F(0) = 0.

Its spectrum is the cosh/sinh decomposition of ``H = F + c cosh(x/2)``
(resp. ``H = F + c``): even-type exponents carry even polynomial
multiplicities (``cosh`` terms), odd-type exponents carry odd ones
(``sinh`` terms).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .exact import (
    Number,
    Poly,
    Quasipoly,
    XSeries,
    analytic_series,
    minimal_annihilator,
    rat,
    rat_str,
    rational_roots,
    real_root_count,
)
from .glhat import hat_phi_correction

__all__ = [
    "QuasifiniteError",
    "HWeight",
    "Spectrum",
    "ClassEntry",
    "ClassData",
    "Classification",
    "MAPS",
    "spectrum_from_delta",
    "delta_from_spectrum",
    "classify",
    "spectrum_from_labels",
    "lambda_from_labels",
    "delta_direct",
    "realize_partition",
    "unitary_via_realization",
    "unitary_root_condition",
    "random_spectrum",
]

HALF = Fraction(1, 2)


class QuasifiniteError(ValueError):
    """The weight is not quasifinite (``F`` is not even or ``F(0) != 0``)."""


def _check_sign(sign: str) -> str:
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    return sign


def _vacuum(sign: str, c: Fraction) -> Quasipoly:
    return Quasipoly.cosh(HALF, c) if sign == "-" else Quasipoly.cosh(0, c)


# ---------------------------------------------------------------------------
# Delta(x) and its labels


def _sinh_half(order: int) -> XSeries:
    return analytic_series("sinh", HALF, order) * 2


def _solve(A: List[List[Fraction]], b: List[Fraction]) -> List[Fraction]:
    n = len(A)
    M = [list(row) + [rhs] for row, rhs in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular system")
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [v * inv for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


def _berlekamp_massey(seq: Sequence[Fraction]) -> List[Fraction]:
    """Shortest connection polynomial ``1 + c_1 z + ... + c_L z^L``."""
    C, B = [Fraction(1)], [Fraction(1)]
    L, shift, b = 0, 1, Fraction(1)
    for n, s_n in enumerate(seq):
        d = s_n + sum(C[i] * seq[n - i] for i in range(1, L + 1))
        if d == 0:
            shift += 1
            continue
        coef = d / b
        T = list(C)
        need = len(B) + shift
        if len(C) < need:
            C += [Fraction(0)] * (need - len(C))
        for i, v in enumerate(B):
            C[i + shift] -= coef * v
        if 2 * L <= n:
            L, B, b, shift = n + 1 - L, T, d, 1
        else:
            shift += 1
    return (C + [Fraction(0)] * (L + 1))[: L + 1]


def _fit_exponential(seq: Sequence[Fraction]) -> Quasipoly:
    """Quasipolynomial ``G`` with ``G^(k)(0) = seq[k]``, all exponents rational."""
    C = _berlekamp_massey(seq)
    L = len(C) - 1
    if 2 * L + 2 > len(seq):
        raise ValueError("not enough labels to determine the quasipolynomial")
    if L == 0:
        return Quasipoly()
    charp = Poly(list(reversed(C)))
    roots = rational_roots(charp)
    if sum(roots.values()) != L:
        raise ValueError("exponents are not rational; only rational data is supported")
    unknowns = [(beta, d) for beta, mult in roots.items() for d in range(mult)]

    def basis(k, beta, d):
        if k < d:
            return Fraction(0)
        return Fraction(factorial(k), factorial(k - d)) * beta ** (k - d)

    A = [[basis(k, beta, d) for beta, d in unknowns] for k in range(L)]
    sol = _solve(A, list(seq[:L]))
    parts: Dict[Fraction, Poly] = {}
    for (beta, d), v in zip(unknowns, sol):
        parts[beta] = parts.get(beta, Poly()) + Poly.monomial(d, v)
    G = Quasipoly.from_exponential(parts)
    check = G.to_xseries(len(seq) - 1)
    if any(check[k] * factorial(k) != seq[k] for k in range(len(seq))):
        raise ValueError("labels are not generated by a quasipolynomial")
    return G


@dataclass(frozen=True)
class HWeight:
    """Highest weight ``(sign, c, F)`` with ``F = 2 Delta(x) sinh(x/2)``."""

    sign: str
    c: Fraction
    F: Quasipoly

    def __post_init__(self):
        _check_sign(self.sign)
        object.__setattr__(self, "c", rat(self.c))

    def delta_series(self, order: int) -> XSeries:
        """``Delta(x)`` to ``x**order``."""
        return self.F.to_xseries(order + 1) / _sinh_half(order + 1)

    def labels(self, nmax: int) -> Dict[int, Fraction]:
        """``{n: Delta_n}`` for odd ``n <= nmax``, ``Delta(x) = sum Delta_n x^n/n!``."""
        ser = self.delta_series(nmax)
        return {n: ser[n] * factorial(n) for n in range(1, nmax + 1, 2)}

    @classmethod
    def from_labels(cls, sign: str, labels: Mapping[int, Number], c: Number) -> "HWeight":
        """Rebuild ``F`` from finitely many labels ``Delta_n`` (``n`` odd).

        Labels missing below the largest given index count as zero.  The
        quasipolynomial is recovered by linear recurrence fitting, so enough
        labels must be supplied to pin it down.
        """
        _check_sign(sign)
        if any(n % 2 == 0 or n < 1 for n in labels):
            raise ValueError("labels are indexed by positive odd n")
        nmax = max(labels) if labels else 1
        delta = XSeries([rat(labels.get(n, 0)) / factorial(n) if n % 2 else 0 for n in range(nmax + 2)], nmax + 1)
        Fser = delta * _sinh_half(nmax + 1)
        seq = [Fser[k] * factorial(k) for k in range(nmax + 2)]
        return cls(sign, rat(c), _fit_exponential(seq))

    def is_quasifinite(self) -> bool:
        return self.F.is_even() and self.F.at_zero() == 0

    def to_json(self) -> dict:
        return {"sign": self.sign, "c": rat_str(self.c), "F": self.F.to_json()}

    @classmethod
    def from_json(cls, data: Mapping) -> "HWeight":
        return cls(data["sign"], rat(data["c"]), Quasipoly.from_json(data["F"]))


# ---------------------------------------------------------------------------
# Spectra


@dataclass(frozen=True)
class Spectrum:
    """Exponents with multiplicities: ``H = sum p_e cosh(e x) + sum q_e sinh(e x)``."""

    sign: str
    even: Dict[Fraction, Poly]
    odd: Dict[Fraction, Poly]
    c: Fraction

    def __post_init__(self):
        _check_sign(self.sign)
        even: Dict[Fraction, Poly] = {}
        for e, p in dict(self.even).items():
            e, p = abs(rat(e)), Poly._coerce(p)
            if not p.is_even():
                raise ValueError("even-type multiplicities must be even polynomials")
            if e in even:
                raise ValueError(f"exponent {e} listed twice")
            if not p.is_zero():
                even[e] = p
        odd: Dict[Fraction, Poly] = {}
        for e, q in dict(self.odd).items():
            e, q = rat(e), Poly._coerce(q)
            if e < 0:
                e, q = -e, -q
            if not q.is_odd():
                raise ValueError("odd-type multiplicities must be odd polynomials")
            if e == 0 and not q.is_zero():
                raise ValueError("odd-type exponents must be nonzero")
            if e in odd:
                raise ValueError(f"exponent {e} listed twice")
            if not q.is_zero():
                odd[e] = q
        object.__setattr__(self, "even", dict(sorted(even.items())))
        object.__setattr__(self, "odd", dict(sorted(odd.items())))
        object.__setattr__(self, "c", rat(self.c))
        total = sum((p.coeff(0) for p in even.values()), Fraction(0))
        if total != self.c:
            raise ValueError(f"sum of p_i(0) is {total}, not the central charge {self.c}")

    @classmethod
    def from_quasipoly(cls, sign: str, H: Quasipoly, c: Number) -> "Spectrum":
        return cls(sign, H.cosh_terms(), H.sinh_terms(), rat(c))

    @classmethod
    def from_lists(cls, sign: str, even: Sequence, odd: Sequence = (), c: Optional[Number] = None) -> "Spectrum":
        """Build from ``[(e, p), ...]`` lists; ``c`` defaults to ``sum p(0)``."""
        ev = {}
        for e, p in even:
            p = Poly._coerce(p) if not isinstance(p, (list, tuple)) else Poly(p)
            ev[abs(rat(e))] = ev.get(abs(rat(e)), Poly()) + p
        od = {}
        for e, q in odd:
            q = Poly._coerce(q) if not isinstance(q, (list, tuple)) else Poly(q)
            e = rat(e)
            if e < 0:
                e, q = -e, -q
            od[e] = od.get(e, Poly()) + q
        if c is None:
            c = sum((p.coeff(0) for p in ev.values()), Fraction(0))
        return cls(sign, ev, od, rat(c))

    def quasipoly(self) -> Quasipoly:
        """``H(x)``: ``F + c cosh(x/2)`` (``-``) or ``F + c`` (``+``)."""
        terms = [("cosh", e, p) for e, p in self.even.items()]
        terms += [("sinh", e, q) for e, q in self.odd.items()]
        return Quasipoly(terms)

    def F(self) -> Quasipoly:
        return self.quasipoly() - _vacuum(self.sign, self.c)

    def reduced(self) -> Dict[Fraction, Poly]:
        """Even-type exponents other than the vacuum one (``1/2`` or ``0``)."""
        skip = HALF if self.sign == "-" else Fraction(0)
        return {e: p for e, p in self.even.items() if e != skip}

    def to_json(self) -> dict:
        return {
            "sign": self.sign,
            "even": [[rat_str(e), p.to_json()] for e, p in self.even.items()],
            "odd": [[rat_str(e), q.to_json()] for e, q in self.odd.items()],
            "c": rat_str(self.c),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Spectrum":
        even = {rat(e): Poly.from_json(p) for e, p in data.get("even", [])}
        odd = {rat(e): Poly.from_json(q) for e, q in data.get("odd", [])}
        return cls(data["sign"], even, odd, rat(data["c"]))


def spectrum_from_delta(w: HWeight) -> Spectrum:
    """Decompose ``F + c cosh(x/2)`` (or ``F + c``) into exponents."""
    if not w.F.is_even():
        raise QuasifiniteError("F(x) is not even")
    if w.F.at_zero() != 0:
        raise QuasifiniteError(f"F(0) = {w.F.at_zero()} is not zero")
    return Spectrum.from_quasipoly(w.sign, w.F + _vacuum(w.sign, w.c), w.c)


def delta_from_spectrum(sp: Spectrum) -> HWeight:
    return HWeight(sp.sign, sp.c, sp.F())


# ---------------------------------------------------------------------------
# Classification


@dataclass(frozen=True)
class Classification:
    quasifinite: bool
    primitive: bool
    positive_primitive: bool
    unitary: bool
    char_poly: Poly

    def to_json(self) -> dict:
        return {
            "quasifinite": self.quasifinite,
            "primitive": self.primitive,
            "positive_primitive": self.positive_primitive,
            "unitary": self.unitary,
            "char_poly": self.char_poly.to_json(),
        }


def _is_nat(v: Fraction) -> bool:
    return v.denominator == 1 and v >= 1


def _is_half_int(v: Fraction) -> bool:
    return (2 * v).denominator == 1


def _constants(sp: Spectrum) -> Optional[Dict[Fraction, Fraction]]:
    if sp.odd or any(p.degree != 0 for p in sp.even.values()):
        return None
    return {e: p.coeff(0) for e, p in sp.even.items()}


def _positive(sp: Spectrum, n: Dict[Fraction, Fraction]) -> bool:
    if sp.sign == "-":
        for e, v in n.items():
            if e == HALF:
                if not (_is_half_int(v) and v > 0):
                    return False
            elif not _is_nat(v):
                return False
        return True
    n_one = n.get(Fraction(1), Fraction(0))
    for e, v in n.items():
        if e == 0:
            if not (_is_half_int(v) and v >= -n_one / 2):
                return False
        elif not _is_nat(v):
            return False
    return True


def _unitary(sp: Spectrum, n: Dict[Fraction, Fraction]) -> bool:
    """The explicit inequalities for the unitary weights."""
    c = sp.c
    if not (_is_half_int(c) and c >= 0):
        return False
    vac = HALF if sp.sign == "-" else Fraction(0)
    rest = {e: v for e, v in n.items() if e != vac}
    if not all(_is_nat(v) for v in rest.values()):
        return False
    if sp.sign == "-":
        return c >= sum(rest.values(), Fraction(0))
    bound = sum((v for e, v in rest.items() if e != 1), Fraction(0)) + rest.get(Fraction(1), Fraction(0)) / 2
    return c >= bound


def classify(sp: Spectrum) -> Classification:
    n = _constants(sp)
    primitive = n is not None
    positive = primitive and _positive(sp, n)
    unitary = primitive and _unitary(sp, n)
    if sp.sign == "-":
        b = minimal_annihilator(sp.quasipoly(), "even")
    else:
        b = minimal_annihilator(sp.F(), "odd")
    return Classification(True, primitive, positive, unitary, b)


def unitary_root_condition(b: Poly, sign: str) -> bool:
    """Root pattern forced on the characteristic polynomial of a unitary
    module: only real roots, nonzero roots simple, and ``0`` at most a
    double (``-``) or simple (``+``) root."""
    _check_sign(sign)
    v = b.valuation()
    rest = Poly(b.coeffs[v:])
    if rest.degree > 0:
        if rest.gcd(rest.derivative()).degree > 0:
            return False
        if real_root_count(rest) != rest.degree:
            return False
    return v <= (2 if sign == "-" else 1)


# ---------------------------------------------------------------------------
# Labels of the classical algebras


MAPS = {
    "gl-": ("-", "gl"),
    "b": ("-", "b"),
    "c": ("-", "c"),
    "gl+": ("+", "gl"),
    "d": ("+", "d"),
    "bt": ("+", "bt"),
}
_MAP_ALIASES = {"b~": "bt", "b̃": "bt", "gl−": "gl-"}
_FIXED_S = {"b": Fraction(0), "c": HALF, "d": Fraction(0), "bt": -HALF}


def _map_name(name: str) -> str:
    name = _MAP_ALIASES.get(name, name)
    if name not in MAPS:
        raise ValueError(f"unknown map {name!r}; expected one of {sorted(MAPS)}")
    return name


def _table(labels: Mapping, m: int) -> Dict[int, List[Fraction]]:
    out: Dict[int, List[Fraction]] = {}
    for i, vals in labels.items():
        vals = [rat(v) for v in vals]
        if len(vals) > m + 1:
            raise ValueError("labels have more u-powers than m allows")
        out[int(i)] = vals + [Fraction(0)] * (m + 1 - len(vals))
    return out


def _eta(j: int, mu: Fraction, a: Fraction) -> Quasipoly:
    """``a * eta_j(x; mu)``."""
    p = Poly.monomial(j, a / factorial(j))
    return Quasipoly.cosh(mu, p) if j % 2 == 0 else Quasipoly.sinh(mu, p)


def _check_constraints(alg: str, h: Dict[int, List[Fraction]], cs: List[Fraction]):
    m = len(cs) - 1
    if alg != "gl" and any(i < 0 for i in h):
        raise ValueError(f"labels of {alg} are indexed by nonnegative integers")
    for j in range(m + 1):
        tot = sum((v[j] for i, v in h.items()), Fraction(0))
        hi = {i: v[j] for i, v in h.items()}
        if alg == "gl":
            want = tot
        elif alg in ("b", "bt"):
            if j % 2:
                continue
            want = hi.get(0, 0) / 2 + tot - hi.get(0, 0)
        elif alg == "c":
            want = tot if j % 2 == 0 else hi.get(0, 0)
        else:
            want = (hi.get(0, 0) + hi.get(1, 0)) / 2 + tot - hi.get(0, 0) - hi.get(1, 0)
        if want != cs[j]:
            raise ValueError(f"labels of {alg} force c_{j} = {want}, got {cs[j]}")


def _tilde(alg: str, i: int, j: int, h: Dict[int, List[Fraction]]) -> Fraction:
    v = h.get(i, None)
    val = v[j] if v is not None else Fraction(0)
    if i != 0:
        return val
    if alg in ("b", "bt"):
        return val / 2 if j % 2 == 0 else val
    if alg == "d":
        h1 = h[1][j] if 1 in h else Fraction(0)
        return (val - h1) / 2
    return val


def spectrum_from_labels(map_name: str, s: Number, m: int, labels: Mapping, central: Sequence[Number]) -> Spectrum:
    """Spectrum of the pullback of a classical highest weight module.

    ``labels[i]`` lists ``h_i^(j)`` for ``j = 0..m``; ``central[j]`` is
    ``c_j``.  The classical maps fix ``s``: ``b`` and ``d`` need ``0``,
    ``c`` needs ``1/2`` and ``bt`` (the twisted ``b``) needs ``-1/2``.
    """
    name = _map_name(map_name)
    sign, alg = MAPS[name]
    s = rat(s)
    if name in _FIXED_S and s != _FIXED_S[name]:
        raise ValueError(f"the {name} map is attached to s = {_FIXED_S[name]}")
    cs = [rat(c) for c in central] + [Fraction(0)] * (m + 1 - len(central))
    if len(cs) != m + 1:
        raise ValueError("central charges have more u-powers than m allows")
    h = _table(labels, m)
    _check_constraints(alg, h, cs)
    shift = -HALF if sign == "-" else Fraction(0)
    H = Quasipoly()
    for i in h:
        for j in range(m + 1):
            v = _tilde(alg, i, j, h)
            if v:
                H = H + _eta(j, s - i + shift, v)
    return Spectrum.from_quasipoly(sign, H, cs[0])


def lambda_from_labels(alg: str, labels: Mapping, central: Sequence[Number]) -> Dict[int, List[Fraction]]:
    """Values ``lambda_i^(j)`` on the Cartan subalgebra from the labels ``h``."""
    cs = [rat(c) for c in central]
    m = len(cs) - 1
    h = _table(labels, m)
    if not h:
        return {}
    out: Dict[int, List[Fraction]] = {}
    lo = min(min(h), 1) if alg == "gl" else (0 if alg in ("b", "bt") else 1)
    hi = max(h)
    for i in range(lo, hi + 1):
        row = []
        for j in range(m + 1):
            if alg == "gl":
                v = sum((h[k][j] for k in h if k >= i), Fraction(0)) - (cs[j] if i <= 0 else 0)
            elif i == 0:
                v = sum((h[k][j] for k in h if k >= 0), -cs[j]) if j % 2 else Fraction(0)
            else:
                v = sum((h[k][j] for k in h if k >= i), Fraction(0))
            row.append(v)
        out[i] = row
    return {i: r for i, r in out.items() if any(r)}


def delta_direct(map_name: str, s: Number, m: int, lam: Mapping, central: Sequence[Number], nmax: int) -> Dict[int, Fraction]:
    """``Delta_n = -xi(D^n)`` (or ``-xi((D+1/2)^n)``) evaluated straight from
    the homomorphism: diagonal of ``phi_s`` against the Cartan values
    ``lam[i][j]`` minus the central correction against ``c_j``.

    For ``b``/``bt``, ``lam[0]`` holds the odd-``j`` values on ``2 u^j E_00``.
    """
    name = _map_name(map_name)
    sign, alg = MAPS[name]
    s = rat(s)
    cs = [rat(c) for c in central] + [Fraction(0)] * (m + 1 - len(central))
    lam = _table(lam, m)
    variant = "minus" if sign == "-" else "plus"
    base = Poly.x() if sign == "-" else Poly([HALF, 1])
    out = {}
    for n in range(1, nmax + 1, 2):
        P = base**n
        total = Fraction(0)
        for i, row in lam.items():
            col = P.shift(s - i)
            for j in range(m + 1):
                a = col.coeff(j)
                if alg == "gl":
                    total += a * row[j]
                elif i >= 1:
                    total += a * row[j]
                elif i == 0 and alg in ("b", "bt") and j % 2 == 1:
                    total += a * row[j] / 2
                elif row[j]:
                    raise ValueError(f"{alg} has no Cartan label at index {i}")
        corr = hat_phi_correction(s, m, variant, n)
        total -= sum((corr[j] * cs[j] for j in range(m + 1)), Fraction(0))
        out[n] = -total
    return out


# ---------------------------------------------------------------------------
# Realization


@dataclass(frozen=True)
class ClassEntry:
    algebra: str
    s: Fraction
    m: int
    h: Dict[int, List[Fraction]]
    c: List[Fraction]

    def map_name(self, sign: str) -> str:
        if self.algebra == "gl":
            return "gl" + sign
        return self.algebra

    def lambdas(self) -> Dict[int, List[Fraction]]:
        return lambda_from_labels(self.algebra, self.h, self.c)

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra,
            "s": rat_str(self.s),
            "m": self.m,
            "h": {str(i): [rat_str(v) for v in row] for i, row in self.h.items()},
            "c": [rat_str(v) for v in self.c],
        }


@dataclass(frozen=True)
class ClassData:
    sign: str
    entries: Tuple[ClassEntry, ...] = field(default_factory=tuple)

    def to_json(self) -> dict:
        return {"sign": self.sign, "classes": [e.to_json() for e in self.entries]}


def _frac(t: Fraction) -> Fraction:
    return t - (t.numerator // t.denominator)


def _admissible(sign: str, t: Fraction) -> bool:
    if t.denominator == 1:
        return t <= 0
    if t.denominator == 2:
        return t <= (HALF if sign == "-" else -HALF)
    return _frac(t) < HALF


def _parameter(sign: str, e: Fraction) -> Tuple[Fraction, int]:
    """The admissible ``s`` for exponent ``e`` and the sign ``mu/e``."""
    base = HALF if sign == "-" else Fraction(0)
    cands = [(base + e, 1), (base - e, -1)]
    if e == 0:
        cands = cands[:1]
    good = [c for c in cands if _admissible(sign, c[0])]
    if len(good) != 1:
        raise ValueError(f"exponent {e}: no unique admissible parameter s")
    return good[0]


def realize_partition(sp: Spectrum, sign: Optional[str] = None) -> ClassData:
    """Split the spectrum into classes of ``s`` modulo ``+-s + Z`` and
    produce the classical labels whose pullbacks multiply to ``sp``."""
    if sign is not None and sign != sp.sign:
        raise ValueError("sign does not match the spectrum")
    sign = sp.sign
    a: Dict[Fraction, Dict[int, Fraction]] = {}
    terms = [(e, p, 1) for e, p in sp.even.items()] + [(e, q, -1) for e, q in sp.odd.items()]
    for e, p, kind in terms:
        s_e, eps = _parameter(sign, e)
        row = a.setdefault(s_e, {})
        for j, coef in enumerate(p.coeffs):
            if coef:
                sgn = eps if kind == -1 else 1
                row[j] = row.get(j, Fraction(0)) + coef * factorial(j) * sgn
    classes: Dict[object, List[Fraction]] = {}
    for t in a:
        key = "Z" if t.denominator == 1 else ("H" if t.denominator == 2 else _frac(t))
        classes.setdefault(key, []).append(t)
    entries = []
    for key, members in classes.items():
        if key == "Z":
            rep, alg = Fraction(0), ("b" if sign == "-" else "d")
        elif key == "H":
            rep, alg = (HALF, "c") if sign == "-" else (-HALF, "bt")
        else:
            rep, alg = max(members), "gl"
        m = max(max(a[t]) for t in members)
        ht: Dict[int, List[Fraction]] = {}
        for t in members:
            k = rep - t
            assert k.denominator == 1 and k >= 0
            ht[int(k)] = [a[t].get(j, Fraction(0)) for j in range(m + 1)]
        entries.append(_class_entry(alg, rep, m, ht))
    entries.sort(key=lambda en: (en.algebra != "gl", en.s))
    return ClassData(sign, tuple(entries))


def _class_entry(alg: str, s: Fraction, m: int, ht: Dict[int, List[Fraction]]) -> ClassEntry:
    """Turn the coefficient table ``a`` (indexed by ``k`` and ``j``) into labels."""
    z = [Fraction(0)] * (m + 1)
    cs, h = [], {k: list(v) for k, v in ht.items()}
    if alg in ("gl", "c"):
        for j in range(m + 1):
            tot = sum((v[j] for v in ht.values()), Fraction(0))
            cs.append(tot if (alg == "gl" or j % 2 == 0) else Fraction(0))
    elif alg in ("b", "bt"):
        h.setdefault(0, list(z))
        for j in range(m + 1):
            if j % 2 == 0:
                cs.append(sum((v[j] for v in ht.values()), Fraction(0)))
                h[0][j] = 2 * ht.get(0, z)[j]
            else:
                cs.append(Fraction(0))
    else:
        h.setdefault(0, list(z))
        for j in range(m + 1):
            h1 = ht.get(1, z)[j]
            rest = sum((v[j] for k, v in ht.items() if k >= 2), Fraction(0))
            if j % 2 == 0:
                cs.append(sum((v[j] for v in ht.values()), Fraction(0)))
                h[0][j] = 2 * ht.get(0, z)[j] + h1
            else:
                cs.append(Fraction(0))
                h[0][j] = -h1 - 2 * rest
    h = {k: v for k, v in sorted(h.items()) if any(v) or k == 0 and alg != "gl"}
    return ClassEntry(alg, s, m, h, cs)


def unitary_via_realization(sp: Spectrum) -> bool:
    """Unitarity read off from the classical labels of every class."""
    if _constants(sp) is None:
        return False
    data = realize_partition(sp)
    for en in data.entries:
        if en.m != 0:
            return False
        h = {i: row[0] for i, row in en.h.items()}
        c = en.c[0]
        if en.algebra == "d":
            if any(not (v.denominator == 1 and v >= 0) for i, v in h.items() if i >= 1):
                return False
            if not (_is_half_int(c) and c >= 0):
                return False
            if c < h.get(1, 0) / 2 + sum((v for i, v in h.items() if i >= 2), Fraction(0)):
                return False
        elif any(not (v.denominator == 1 and v >= 0) for v in h.values()):
            return False
    return True


# ---------------------------------------------------------------------------
# Random data


def _rand_rat(rng: random.Random, num: int = 6, dens=(1, 2, 3, 4, 6)) -> Fraction:
    return Fraction(rng.randint(-num, num), rng.choice(dens))


def random_spectrum(rng: random.Random, sign: str = "-", n_even: int = 3, n_odd: int = 2, maxdeg: int = 4) -> Spectrum:
    """A random valid spectrum with rational exponents; ``c = sum p(0)``."""
    _check_sign(sign)
    even, odd = {}, {}
    for _ in range(rng.randint(0, n_even)):
        e = abs(_rand_rat(rng))
        coeffs = [_rand_rat(rng) if k % 2 == 0 else 0 for k in range(rng.randint(0, maxdeg) + 1)]
        even[e] = even.get(e, Poly()) + Poly(coeffs)
    for _ in range(rng.randint(0, n_odd)):
        e = abs(_rand_rat(rng))
        if e == 0:
            continue
        coeffs = [_rand_rat(rng) if k % 2 == 1 else 0 for k in range(rng.randint(1, maxdeg) + 1)]
        odd[e] = odd.get(e, Poly()) + Poly(coeffs)
    even = {e: p for e, p in even.items() if not p.is_zero()}
    odd = {e: q for e, q in odd.items() if not q.is_zero()}
    c = sum((p.coeff(0) for p in even.values()), Fraction(0))
    return Spectrum(sign, even, odd, c)

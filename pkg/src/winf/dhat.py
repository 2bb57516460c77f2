"""The Lie algebra of differential operators on the circle and its
fixed-point subalgebras.

An element ``t^k f(D)`` (``D = t d/dt``) is stored as ``{k: f}``; a
:class:`DOp` is a finite sum of these plus a multiple of the central
element ``C``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .exact import Number, Poly, falling_factorial, rat, rat_str

__all__ = [
    "DOp",
    "InvolutionTag",
    "bracket",
    "cocycle",
    "cocycle_residue",
    "anti_involution",
    "theta",
    "membership",
    "graded_center",
    "basis_element",
    "virasoro",
    "char_poly_of_ideal",
    "DivisibilityReport",
    "verify_char_divisibility",
    "parabolic_closure",
    "random_parabolic_generators",
    "random_dop",
    "random_member",
]


class DOp:
    """Element ``sum_k t^k f_k(D) + central*C``."""

    __slots__ = ("terms", "central")

    def __init__(self, terms: Optional[Mapping[int, Poly]] = None, central: Number = 0):
        clean: Dict[int, Poly] = {}
        for k, f in (terms or {}).items():
            if not isinstance(f, Poly):
                f = Poly._coerce(f)
            if not f.is_zero():
                clean[int(k)] = f
        object.__setattr__(self, "terms", dict(sorted(clean.items())))
        object.__setattr__(self, "central", rat(central))

    def __setattr__(self, name, value):
        raise AttributeError("DOp is immutable")

    # shorthand constructors ---------------------------------------------
    @classmethod
    def t(cls, k: int = 1, f=1) -> "DOp":
        """``t^k f(D)``."""
        return cls({k: Poly._coerce(f)})

    @classmethod
    def D(cls, n: int = 1) -> "DOp":
        return cls({0: Poly.monomial(n)})

    @classmethod
    def C(cls, c: Number = 1) -> "DOp":
        return cls({}, c)

    # queries ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms and self.central == 0

    def component(self, k: int) -> Poly:
        return self.terms.get(k, Poly())

    def noncentral(self) -> "DOp":
        return DOp(self.terms)

    def weights(self) -> List[int]:
        return list(self.terms)

    def degree(self) -> int:
        return max((f.degree for f in self.terms.values()), default=-1)

    # vector space structure ---------------------------------------------
    def __add__(self, other: "DOp") -> "DOp":
        terms = dict(self.terms)
        for k, f in other.terms.items():
            terms[k] = terms.get(k, Poly()) + f
        return DOp(terms, self.central + other.central)

    def __neg__(self) -> "DOp":
        return DOp({k: -f for k, f in self.terms.items()}, -self.central)

    def __sub__(self, other: "DOp") -> "DOp":
        return self + (-other)

    def __mul__(self, c: Number) -> "DOp":
        c = rat(c)
        return DOp({k: f * c for k, f in self.terms.items()}, self.central * c)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, DOp):
            return NotImplemented
        return self.terms == other.terms and self.central == other.central

    def __hash__(self):
        return hash((tuple(self.terms.items()), self.central))

    def __repr__(self) -> str:
        parts = [f"t^{k}*({f.format('D')})" for k, f in self.terms.items()]
        if self.central:
            parts.append(f"{rat_str(self.central)}*C")
        return "DOp(" + (" + ".join(parts) if parts else "0") + ")"

    def to_json(self) -> dict:
        return {
            "terms": [[k, f.to_json()] for k, f in self.terms.items()],
            "central": rat_str(self.central),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "DOp":
        terms: Dict[int, Poly] = {}
        for k, cs in data.get("terms", []):
            terms[int(k)] = terms.get(int(k), Poly()) + Poly.from_json(cs)
        return cls(terms, rat(data.get("central", 0)))


# ---------------------------------------------------------------------------
# bracket and cocycle
# ---------------------------------------------------------------------------


def _monomial_cocycle(r: int, f: Poly, s: int, g: Poly) -> Fraction:
    """Cocycle on ``(t^r f(D), t^s g(D))`` by the finite-sum formula."""
    if r + s != 0 or r == 0:
        return Fraction(0)
    if r > 0:
        return sum((f(j) * g(j + r) for j in range(-r, 0)), Fraction(0))
    return -_monomial_cocycle(s, g, r, f)


def cocycle(a: DOp, b: DOp) -> Fraction:
    """The 2-cocycle evaluated with the sum formula."""
    total = Fraction(0)
    for r, f in a.terms.items():
        g = b.terms.get(-r)
        if g is not None:
            total += _monomial_cocycle(r, f, -r, g)
    return total


def _newton_coefficients(f: Poly) -> List[Fraction]:
    """Coefficients ``a_l`` with ``f(w) = sum_l a_l [w]_l``."""
    n = f.degree
    if n < 0:
        return []
    vals = [f(j) for j in range(n + 1)]
    out = []
    for l in range(n + 1):
        out.append(vals[0] / factorial(l))
        vals = [vals[i + 1] - vals[i] for i in range(len(vals) - 1)]
    return out


def to_derivative_form(a: DOp) -> Dict[Tuple[int, int], Fraction]:
    """Rewrite ``a`` as ``sum c_{p,l} t^p d^l`` using ``t^k [D]_l = t^(k+l) d^l``."""
    out: Dict[Tuple[int, int], Fraction] = {}
    for k, f in a.terms.items():
        for l, c in enumerate(_newton_coefficients(f)):
            if c:
                out[(k + l, l)] = out.get((k + l, l), Fraction(0)) + c
    return out


def cocycle_residue(a: DOp, b: DOp) -> Fraction:
    """The 2-cocycle via ``m! n! / (m+n+1)! Res f^(n+1) g^(m)``.

    Here ``a = f(t) d^m`` and ``b = g(t) d^n`` after conversion to the
    ``t^p d^l`` form.
    """
    total = Fraction(0)
    fa = to_derivative_form(a)
    fb = to_derivative_form(b)
    for (p, m), c1 in fa.items():
        for (p2, n), c2 in fb.items():
            # f = t^p, g = t^p2; the residue picks total exponent -1
            if (p - n - 1) + (p2 - m) != -1:
                continue
            deriv_f = falling_factorial(n + 1)(p)
            deriv_g = falling_factorial(m)(p2)
            weight = Fraction(factorial(m) * factorial(n), factorial(m + n + 1))
            total += c1 * c2 * weight * deriv_f * deriv_g
    return total


def bracket(a: DOp, b: DOp) -> DOp:
    """``[a, b]`` in the central extension; central inputs drop out."""
    terms: Dict[int, Poly] = {}
    for r, f in a.terms.items():
        for s, g in b.terms.items():
            h = f.shift(s) * g - f * g.shift(r)
            if not h.is_zero():
                terms[r + s] = terms.get(r + s, Poly()) + h
    return DOp(terms, cocycle(a, b))


def bracket0(a: DOp, b: DOp) -> DOp:
    """Non-central part of :func:`bracket`."""
    return bracket(a, b).noncentral()


# ---------------------------------------------------------------------------
# anti-involutions and fixed-point subalgebras
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InvolutionTag:
    sign: str  # "+" or "-"
    b: Fraction = Fraction(0)

    def __post_init__(self):
        if self.sign not in ("+", "-"):
            raise ValueError("sign must be '+' or '-'")
        object.__setattr__(self, "b", rat(self.b))


def _sign_value(sign: str) -> int:
    if sign == "+":
        return 1
    if sign == "-":
        return -1
    raise ValueError("sign must be '+' or '-'")


def anti_involution(tag: InvolutionTag, a: DOp) -> DOp:
    """``sigma(t^k f(D)) = (+-1)^k t^k f(-D - k + b)``."""
    if a.central != 0:
        raise ValueError("anti_involution acts on central-free elements only")
    eps = _sign_value(tag.sign)
    out = {}
    for k, f in a.terms.items():
        out[k] = f(Poly([tag.b - k, -1])) * (eps**k if k >= 0 else eps ** (-k))
    return DOp(out)


def theta(s: Number, a: DOp) -> DOp:
    """The automorphism ``D -> D + s``, ``t -> t``."""
    s = rat(s)
    return DOp({k: f.shift(s) for k, f in a.terms.items()}, a.central)


def graded_center(sign: str, b: Number, j: int) -> Fraction:
    """Shift ``c`` such that weight-``j`` elements read ``t^j g(D + c)``."""
    return Fraction(j - rat(b), 2)


def membership(sign: str, b: Number, a: DOp) -> bool:
    """Whether ``a`` lies in the fixed-point algebra of ``-sigma_{sign,b}``.

    Component ``t^j g(D + (j - b)/2)`` must have ``g`` odd in the ``+``
    case, and ``g(-y) = (-1)^(j+1) g(y)`` in the ``-`` case.
    """
    _sign_value(sign)
    for j, f in a.terms.items():
        g = f.shift(-graded_center(sign, b, j))
        if sign == "+" or j % 2 == 0:
            if not g.is_odd():
                return False
        elif not g.is_even():
            return False
    return True


def required_parity(sign: str, j: int) -> str:
    """Parity of ``g`` in the weight-``j`` component of the subalgebra."""
    if sign == "+" or j % 2 == 0:
        return "odd"
    return "even"


# ---------------------------------------------------------------------------
# distinguished bases
# ---------------------------------------------------------------------------


def basis_element(kind: str, n: int, s: Number, k: int) -> DOp:
    """``T^{n,s}_k`` or ``W^{n,s}_k`` in canonical ``t^k f(D)`` form."""
    if n < 1:
        raise ValueError("basis index n must be >= 1")
    s = rat(s)
    ff = falling_factorial(n)
    if kind == "T":
        f = ff(Poly([-s, 1])) + ff(Poly([-k - s, -1])) * (1 if (k + 1) % 2 == 0 else -1)
        return DOp({k: -f})
    if kind == "W":
        f = ff(Poly([s, 1])) - ff(Poly([-k - 1 + s, -1]))
        return DOp({k: f * Fraction(-1, 2)})
    raise ValueError(f"unknown basis kind {kind!r}")


def d_power_times_t(n: int, m: int) -> DOp:
    """``d^n t^m`` as ``t^(m-n) [D + m]_n``."""
    return DOp({m - n: falling_factorial(n).shift(m)})


def t_times_d_power(m: int, n: int) -> DOp:
    """``t^m d^n`` as ``t^(m-n) [D]_n``."""
    return DOp({m - n: falling_factorial(n)})


def w_from_derivatives(n: int, k: int) -> DOp:
    """``W^n_k`` built from ``-1/2 (t^(k+n) d^n + (-1)^(n+1) d^n t^(k+n))``."""
    a = t_times_d_power(k + n, n)
    b = d_power_times_t(n, k + n) * (-1) ** (n + 1)
    return (a + b) * Fraction(-1, 2)


def virasoro(k: int) -> DOp:
    """``W^1_k = -t^k (D + (k+1)/2)``."""
    return DOp({k: Poly([Fraction(-(k + 1), 2), -1])})


# ---------------------------------------------------------------------------
# characteristic polynomials of parabolic subalgebras
# ---------------------------------------------------------------------------


def char_poly_of_ideal(gens: Iterable[Poly], parity: str) -> Poly:
    """Monic generator of the module over even polynomials spanned by ``gens``.

    ``parity`` is ``"even"`` or ``"odd"`` (the parity of the ambient
    module).  Returns the zero polynomial for an empty or all-zero list.
    """
    if parity in ("even-module", "odd-module"):
        parity = parity.split("-")[0]
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    g = Poly()
    for p in gens:
        if p.is_zero():
            continue
        ok = p.is_even() if parity == "even" else p.is_odd()
        if not ok:
            raise ValueError(f"generator {p.format()} is not {parity}")
        g = g.gcd(p)
    return g


def char_parity(sign: str, k: int) -> str:
    """Parity of the ``k``-th characteristic polynomial."""
    if sign == "+":
        return "odd"
    return "even" if k % 2 == 1 else "odd"


@dataclass
class Clause:
    name: str
    k: int
    l: Optional[int]
    passed: bool
    detail: str = ""


@dataclass
class DivisibilityReport:
    sign: str
    clauses: List[Clause] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.clauses)

    def failures(self) -> List[Clause]:
        return [c for c in self.clauses if not c.passed]

    def to_json(self) -> dict:
        return {
            "sign": self.sign,
            "ok": self.ok,
            "clauses": [
                {"clause": c.name, "k": c.k, "l": c.l, "passed": c.passed, "detail": c.detail}
                for c in self.clauses
            ],
        }


def verify_char_divisibility(seq: Mapping[int, Poly], sign: str) -> DivisibilityReport:
    """Check the divisibility lemmas on a finite sequence ``{k: b_k}``.

    Clauses are evaluated for every index combination inside the given
    range.  A zero ``b_k`` fails the nonvanishing clause and the clauses
    that involve it are skipped.
    """
    _sign_value(sign)
    report = DivisibilityReport(sign)
    ks = sorted(seq)
    w = Poly.x()
    half = Fraction(1, 2)
    nonzero = {k for k in ks if not seq[k].is_zero()}
    for k in ks:
        b = seq[k]
        report.clauses.append(Clause("nonzero", k, None, k in nonzero))
        if k in nonzero:
            want = char_parity(sign, k)
            got = b.is_even() if want == "even" else b.is_odd()
            report.clauses.append(Clause("parity", k, None, got, want))
            report.clauses.append(Clause("monic", k, None, b.lead == 1))

    def check(name, k, l, divisor, target):
        ok = divisor.divides(target)
        detail = f"{divisor.format()} | {target.format()}"
        report.clauses.append(Clause(name, k, l, ok, detail))

    for k in ks:
        if k not in nonzero or k + 1 not in nonzero:
            continue
        bk, bk1 = seq[k], seq[k + 1]
        if sign == "-":
            check("step-minus", k, None, bk, w * bk1.shift(-half))
            check("step-plus", k, None, bk, w * bk1.shift(half))
        else:
            check("step", k, None, bk, w * Poly([Fraction(k + 1, 2), 1]) * bk1.shift(half))
    for k in ks:
        for l in ks:
            if k + l not in seq:
                continue
            if not {k, l, k + l} <= nonzero:
                continue
            if sign == "-":
                target = w * seq[k].shift(Fraction(-l, 2)) * seq[l].shift(Fraction(k, 2))
            else:
                target = w * seq[k].shift(Fraction(l, 2)) * seq[l].shift(Fraction(-k, 2))
            check("sum", k, l, seq[k + l], target)
    return report


def _parabolic_center(sign: str, k: int) -> Fraction:
    """Elements of the degree ``-k`` piece read ``t^(-k) h(D + c)``."""
    return Fraction(-k, 2) if sign == "-" else Fraction(1 - k, 2)


def _algebra_basis(sign: str, j: int, maxdeg: int) -> List[DOp]:
    b = 0 if sign == "-" else -1
    c = graded_center(sign, b, j)
    first = 1 if required_parity(sign, j) == "odd" else 0
    return [DOp({j: Poly([c, 1]) ** p}) for p in range(first, maxdeg + 1, 2)]


def parabolic_closure(
    sign: str,
    generators: Mapping[int, Iterable[Poly]],
    depth: int,
    basis_degree: int = 3,
    max_rounds: int = 50,
) -> Dict[int, Poly]:
    """Characteristic polynomials of the parabolic subalgebra generated by
    the nonnegative part and ``t^(-k) h(D + c_k)`` for the given ``h``.

    Only degrees ``-1 .. -depth`` are tracked.  Each round brackets the
    current generators ``t^(-k) b_k e`` (``e`` in ``{1, w^2}``) among
    themselves and with a basis of the positive part up to
    ``basis_degree``, and replaces ``b_k`` by the gcd with everything that
    lands in degree ``-k``.
    """
    _sign_value(sign)
    w2 = Poly([0, 0, 1])
    b: Dict[int, Poly] = {}
    for k in range(1, depth + 1):
        b[k] = char_poly_of_ideal(generators.get(k, []), char_parity(sign, k))

    def element(k: int, h: Poly) -> DOp:
        return DOp({-k: h.shift(_parabolic_center(sign, k))})

    def absorb(new: Dict[int, List[Poly]], x: DOp):
        for j, f in x.terms.items():
            if j < 0 and -j <= depth:
                new.setdefault(-j, []).append(f.shift(-_parabolic_center(sign, -j)))

    positive = {j: _algebra_basis(sign, j, basis_degree) for j in range(1, depth)}
    for _ in range(max_rounds):
        new: Dict[int, List[Poly]] = {}
        gens = {k: [element(k, b[k]), element(k, b[k] * w2)] for k in b if not b[k].is_zero()}
        for k, elems in gens.items():
            for j, basis in positive.items():
                if k - j < 1:
                    continue
                for x in basis:
                    for y in elems:
                        absorb(new, bracket(x, y))
            for k2, elems2 in gens.items():
                if k + k2 > depth or k2 < k:
                    continue
                for x in elems:
                    for y in elems2:
                        absorb(new, bracket(x, y))
        changed = False
        for k, polys in new.items():
            g = char_poly_of_ideal([b[k]] + polys, char_parity(sign, k))
            if g != b[k]:
                b[k] = g
                changed = True
        if not changed:
            break
    return b


def random_parabolic_generators(rng: random.Random, sign: str, depth: int) -> Dict[int, List[Poly]]:
    """A few random monic generators of the right parity in random degrees."""
    out: Dict[int, List[Poly]] = {}
    for _ in range(rng.randint(1, 2)):
        k = rng.randint(1, depth)
        p = Poly.const(1)
        for _ in range(rng.randint(0, 2)):
            a = Fraction(rng.randint(0, 6), rng.choice([1, 2]))
            p = p * Poly([-a * a, 0, 1])
        p = p * Poly.monomial(rng.randint(0, 2))
        want = char_parity(sign, k)
        if (want == "even") != p.is_even():
            p = p * Poly.x()
        out.setdefault(k, []).append(p)
    return out


# ---------------------------------------------------------------------------
# random elements for property tests
# ---------------------------------------------------------------------------


def _random_rat(rng: random.Random, size: int = 5) -> Fraction:
    return Fraction(rng.randint(-size, size), rng.randint(1, 3))


def random_poly(rng: random.Random, maxdeg: int) -> Poly:
    return Poly(_random_rat(rng) for _ in range(rng.randint(0, maxdeg) + 1))


def random_dop(rng: random.Random, maxdeg: int = 6, maxk: int = 4, nterms: int = 3) -> DOp:
    terms: Dict[int, Poly] = {}
    for _ in range(rng.randint(1, nterms)):
        k = rng.randint(-maxk, maxk)
        terms[k] = terms.get(k, Poly()) + random_poly(rng, maxdeg)
    return DOp(terms)


def random_member(rng: random.Random, sign: str, b: Number = None, maxdeg: int = 5, maxk: int = 3, nterms: int = 3) -> DOp:
    """Random element of the fixed-point algebra (``b`` defaults to the
    standard choice: 0 for ``-``, -1 for ``+``)."""
    if b is None:
        b = 0 if sign == "-" else -1
    b = rat(b)
    terms: Dict[int, Poly] = {}
    for _ in range(rng.randint(1, nterms)):
        j = rng.randint(-maxk, maxk)
        g = random_poly(rng, maxdeg)
        g = g.odd_part() if required_parity(sign, j) == "odd" else g.even_part()
        f = g.shift(graded_center(sign, b, j))
        terms[j] = terms.get(j, Poly()) + f
    return DOp(terms)

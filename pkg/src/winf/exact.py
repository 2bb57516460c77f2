"""Exact arithmetic kernel.

Everything here is built on :class:`fractions.Fraction`.  The types are
immutable value objects:

* :class:`Poly`      univariate polynomial, coefficients in ascending order
* :class:`XSeries`   power series in ``x`` truncated at a fixed order
* :class:`QSeries`   power series in ``q**(1/2)`` truncated at a fixed order
* :class:`Quasipoly` finite sums ``p(x) cosh(a x) + q(x) sinh(a x)``
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial, gcd, isqrt
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple, Union

Rat = Fraction
Number = Union[int, Fraction]

__all__ = [
    "Rat",
    "rat",
    "rat_str",
    "Poly",
    "XSeries",
    "QSeries",
    "Quasipoly",
    "falling_factorial",
    "analytic_series",
    "minimal_annihilator",
    "euler_phi",
    "q_pochhammer",
    "real_root_count",
    "rational_roots",
]


def rat(value) -> Fraction:
    """Coerce ``value`` (int, Fraction or a ``"p/q"`` string) to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def rat_str(value: Number) -> str:
    """Serialize a rational as ``"p/q"`` (or ``"p"`` for integers)."""
    value = rat(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


class Poly:
    """Univariate polynomial over the rationals.

    ``Poly([c0, c1, c2])`` is ``c0 + c1*w + c2*w**2``.  The variable name is
    irrelevant; ``repr`` prints it as ``w``.
    """

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable[Number] = ()):
        cs = [rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, c: Number) -> "Poly":
        return cls([c])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def monomial(cls, n: int, c: Number = 1) -> "Poly":
        if n < 0:
            raise ValueError("negative exponent")
        return cls([0] * n + [c])

    @classmethod
    def from_roots(cls, roots: Iterable[Number]) -> "Poly":
        out = cls.const(1)
        for r in roots:
            out = out * cls([-rat(r), 1])
        return out

    # basic queries ------------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, n: int) -> Fraction:
        if 0 <= n < len(self.coeffs):
            return self.coeffs[n]
        return Fraction(0)

    def is_even(self) -> bool:
        return all(c == 0 for c in self.coeffs[1::2])

    def is_odd(self) -> bool:
        return all(c == 0 for c in self.coeffs[0::2])

    def parity(self) -> str:
        """``"even"``, ``"odd"`` or ``"neither"``.  Zero reports ``"even"``."""
        if self.is_even():
            return "even"
        if self.is_odd():
            return "odd"
        return "neither"

    def even_part(self) -> "Poly":
        return Poly(c if i % 2 == 0 else 0 for i, c in enumerate(self.coeffs))

    def odd_part(self) -> "Poly":
        return Poly(c if i % 2 == 1 else 0 for i, c in enumerate(self.coeffs))

    # arithmetic ---------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly([rat(other)])

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.coeff(i) + other.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = rat(other)
            return Poly(c * a for a in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __truediv__(self, c: Number) -> "Poly":
        c = rat(c)
        return Poly(a / c for a in self.coeffs)

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out, base = Poly.const(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other: "Poly") -> Tuple["Poly", "Poly"]:
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.lead
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for i in range(len(rem) - dq - 1, -1, -1):
            c = rem[i + dq] / lead
            quot[i] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[i + j] -= c * b
        return Poly(quot), Poly(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    def divides(self, other: "Poly") -> bool:
        """True iff ``self`` divides ``other`` (zero divides only zero)."""
        if self.is_zero():
            return other.is_zero()
        return (other % self).is_zero()

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self / self.lead

    def gcd(self, other: "Poly") -> "Poly":
        """Monic gcd; ``gcd(0, 0) = 0``."""
        a, b = self, self._coerce(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    # evaluation and substitution ----------------------------------------
    def __call__(self, value):
        """Evaluate at a number, or compose with another :class:`Poly`."""
        if isinstance(value, Poly):
            out = Poly()
            for c in reversed(self.coeffs):
                out = out * value + c
            return out
        v = rat(value)
        out = Fraction(0)
        for c in reversed(self.coeffs):
            out = out * v + c
        return out

    def shift(self, a: Number) -> "Poly":
        """Return ``p(w + a)``."""
        return self(Poly([a, 1]))

    def scale(self, a: Number) -> "Poly":
        """Return ``p(a*w)``."""
        a = rat(a)
        return Poly(c * a**i for i, c in enumerate(self.coeffs))

    def reflect(self) -> "Poly":
        """Return ``p(-w)``."""
        return self.scale(-1)

    def derivative(self, k: int = 1) -> "Poly":
        cs = self.coeffs
        for _ in range(k):
            cs = tuple(i * c for i, c in enumerate(cs))[1:]
        return Poly(cs)

    def valuation(self) -> int:
        """Largest ``v`` with ``w**v`` dividing ``self`` (-1 for zero)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return -1

    # comparison and display ---------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash(("Poly", self.coeffs))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        return f"Poly({self.format()})"

    def format(self, var: str = "w") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = rat_str(abs(c)) + (("*" + mono) if mono else "")
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def to_json(self) -> list:
        return [rat_str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence) -> "Poly":
        return cls(rat(c) for c in data)


def falling_factorial(l: int) -> Poly:
    """The falling factorial ``[x]_l = x (x-1) ... (x-l+1)``."""
    if l < 0:
        raise ValueError("falling factorial needs l >= 0")
    return Poly.from_roots(range(l))


# ---------------------------------------------------------------------------
# Truncated power series in x
# ---------------------------------------------------------------------------


class XSeries:
    """Power series ``sum c_n x**n`` known exactly for ``n <= order``."""

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Iterable[Number], order: int):
        if order < 0:
            raise ValueError("order must be >= 0")
        cs = [rat(c) for c in list(coeffs)[: order + 1]]
        cs += [Fraction(0)] * (order + 1 - len(cs))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("XSeries is immutable")

    @classmethod
    def from_poly(cls, p: Poly, order: int) -> "XSeries":
        return cls(p.coeffs, order)

    @classmethod
    def exp(cls, scale: Number, order: int) -> "XSeries":
        a = rat(scale)
        return cls((a**n / factorial(n) for n in range(order + 1)), order)

    def __getitem__(self, n: int) -> Fraction:
        if n < 0 or n > self.order:
            if n < 0:
                return Fraction(0)
            raise IndexError(f"coefficient x^{n} is beyond the truncation order {self.order}")
        return self.coeffs[n]

    def _align(self, other) -> Tuple["XSeries", "XSeries"]:
        if not isinstance(other, XSeries):
            other = XSeries([rat(other)], self.order)
        n = min(self.order, other.order)
        return XSeries(self.coeffs, n), XSeries(other.coeffs, n)

    def __add__(self, other) -> "XSeries":
        a, b = self._align(other)
        return XSeries((x + y for x, y in zip(a.coeffs, b.coeffs)), a.order)

    __radd__ = __add__

    def __neg__(self) -> "XSeries":
        return XSeries((-c for c in self.coeffs), self.order)

    def __sub__(self, other) -> "XSeries":
        a, b = self._align(other)
        return XSeries((x - y for x, y in zip(a.coeffs, b.coeffs)), a.order)

    def __rsub__(self, other) -> "XSeries":
        return (-self) + other

    def __mul__(self, other) -> "XSeries":
        if not isinstance(other, XSeries):
            c = rat(other)
            return XSeries((c * a for a in self.coeffs), self.order)
        a, b = self._align(other)
        n = a.order
        out = [Fraction(0)] * (n + 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j in range(n + 1 - i):
                    out[i + j] += x * b.coeffs[j]
        return XSeries(out, n)

    __rmul__ = __mul__

    def valuation(self) -> int:
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return self.order + 1

    def __truediv__(self, other) -> "XSeries":
        """Series division.

        Common leading powers of ``x`` are cancelled first, which lowers the
        order of the result by the valuation of the divisor.  Raises
        :class:`ZeroDivisionError` if the numerator cannot absorb them.
        """
        if not isinstance(other, XSeries):
            c = rat(other)
            return XSeries((a / c for a in self.coeffs), self.order)
        v = other.valuation()
        if v > other.order:
            raise ZeroDivisionError("division by a series that vanishes to its order")
        if v:
            if any(self.coeffs[:v]):
                raise ZeroDivisionError("division by a series with zero constant term")
            num = XSeries(self.coeffs[v:], self.order - v)
            den = XSeries(other.coeffs[v:], other.order - v)
            return num / den
        a, b = self._align(other)
        n = a.order
        inv0 = 1 / b.coeffs[0]
        out = [Fraction(0)] * (n + 1)
        for k in range(n + 1):
            acc = a.coeffs[k]
            for j in range(1, k + 1):
                acc -= b.coeffs[j] * out[k - j]
            out[k] = acc * inv0
        return XSeries(out, n)

    def truncate(self, order: int) -> "XSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return XSeries(self.coeffs, order)

    def shift_x(self, k: int) -> "XSeries":
        """Multiply by ``x**k``."""
        return XSeries([Fraction(0)] * k + list(self.coeffs), self.order)

    def __eq__(self, other) -> bool:
        if not isinstance(other, XSeries):
            return NotImplemented
        a, b = self._align(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        return hash(("XSeries", self.order, self.coeffs))

    def __repr__(self) -> str:
        return f"XSeries({Poly(self.coeffs).format('x')} + O(x^{self.order + 1}))"

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [rat_str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: Mapping) -> "XSeries":
        return cls([rat(c) for c in data["coeffs"]], int(data["order"]))


# ---------------------------------------------------------------------------
# Truncated power series in q^(1/2)
# ---------------------------------------------------------------------------


def _half_index(exponent: Number) -> int:
    e2 = 2 * rat(exponent)
    if e2.denominator != 1:
        raise ValueError(f"q-exponent {exponent} is not a half-integer")
    return int(e2)


class QSeries:
    """Series ``sum_k c_k q**(k/2)`` known for ``k <= order2``.

    ``order2`` is the truncation order measured in steps of ``q**(1/2)``.
    Use :meth:`truncated` to build one from an integer order.
    """

    __slots__ = ("order2", "coeffs")

    def __init__(self, coeffs: Iterable[Number], order2: int):
        if order2 < 0:
            raise ValueError("order must be >= 0")
        cs = [rat(c) for c in list(coeffs)[: order2 + 1]]
        cs += [Fraction(0)] * (order2 + 1 - len(cs))
        object.__setattr__(self, "order2", order2)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("QSeries is immutable")

    # construction -------------------------------------------------------
    @classmethod
    def one(cls, order: Number) -> "QSeries":
        return cls([1], _half_index(order))

    @classmethod
    def zero(cls, order: Number) -> "QSeries":
        return cls([], _half_index(order))

    @classmethod
    def monomial(cls, exponent: Number, order: Number, c: Number = 1) -> "QSeries":
        """``c * q**exponent`` truncated at ``order`` (dropped if beyond)."""
        k, n = _half_index(exponent), _half_index(order)
        if k < 0:
            raise ValueError("negative q-exponent")
        cs = [Fraction(0)] * (n + 1)
        if k <= n:
            cs[k] = rat(c)
        return cls(cs, n)

    @classmethod
    def from_dict(cls, terms: Mapping[Number, Number], order: Number) -> "QSeries":
        n = _half_index(order)
        cs = [Fraction(0)] * (n + 1)
        for e, c in terms.items():
            k = _half_index(e)
            if k < 0:
                raise ValueError("negative q-exponent")
            if k <= n:
                cs[k] += rat(c)
        return cls(cs, n)

    @property
    def order(self) -> Fraction:
        return Fraction(self.order2, 2)

    def __getitem__(self, exponent: Number) -> Fraction:
        k = _half_index(exponent)
        if k < 0:
            return Fraction(0)
        if k > self.order2:
            raise IndexError(f"q^{exponent} is beyond the truncation order {self.order}")
        return self.coeffs[k]

    def items(self) -> Iterator[Tuple[Fraction, Fraction]]:
        """Nonzero ``(exponent, coefficient)`` pairs."""
        for k, c in enumerate(self.coeffs):
            if c:
                yield Fraction(k, 2), c

    def integer_coeffs(self) -> list:
        """Coefficients of ``q**0, q**1, ...`` (requires no half-integer terms)."""
        if any(self.coeffs[1::2]):
            raise ValueError("series has half-integer powers")
        return list(self.coeffs[0::2])

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    # arithmetic ---------------------------------------------------------
    def _align(self, other) -> Tuple["QSeries", "QSeries"]:
        if not isinstance(other, QSeries):
            other = QSeries([rat(other)], self.order2)
        n = min(self.order2, other.order2)
        return QSeries(self.coeffs, n), QSeries(other.coeffs, n)

    def __add__(self, other) -> "QSeries":
        a, b = self._align(other)
        return QSeries((x + y for x, y in zip(a.coeffs, b.coeffs)), a.order2)

    __radd__ = __add__

    def __neg__(self) -> "QSeries":
        return QSeries((-c for c in self.coeffs), self.order2)

    def __sub__(self, other) -> "QSeries":
        a, b = self._align(other)
        return QSeries((x - y for x, y in zip(a.coeffs, b.coeffs)), a.order2)

    def __rsub__(self, other) -> "QSeries":
        return (-self) + other

    def __mul__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            c = rat(other)
            return QSeries((c * a for a in self.coeffs), self.order2)
        a, b = self._align(other)
        n = a.order2
        out = [Fraction(0)] * (n + 1)
        bnz = [(j, y) for j, y in enumerate(b.coeffs) if y]
        for i, x in enumerate(a.coeffs):
            if x:
                lim = n - i
                for j, y in bnz:
                    if j > lim:
                        break
                    out[i + j] += x * y
        return QSeries(out, n)

    __rmul__ = __mul__

    def inverse(self) -> "QSeries":
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ZeroDivisionError("inverse of a q-series with zero constant term")
        n = self.order2
        out = [Fraction(0)] * (n + 1)
        out[0] = 1 / c0
        nz = [(j, y) for j, y in enumerate(self.coeffs) if y and j]
        for k in range(1, n + 1):
            acc = Fraction(0)
            for j, y in nz:
                if j > k:
                    break
                acc += y * out[k - j]
            out[k] = -acc / c0
        return QSeries(out, n)

    def __truediv__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            c = rat(other)
            return QSeries((a / c for a in self.coeffs), self.order2)
        return self * other.inverse()

    def __pow__(self, n: int) -> "QSeries":
        if n < 0:
            return self.inverse() ** (-n)
        out = QSeries([1], self.order2)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, exponent: Number) -> "QSeries":
        """Multiply by ``q**exponent`` (exponent >= 0), keeping the order."""
        k = _half_index(exponent)
        if k < 0:
            raise ValueError("negative q-shift")
        return QSeries([Fraction(0)] * k + list(self.coeffs), self.order2)

    def truncate(self, order: Number) -> "QSeries":
        n = _half_index(order)
        if n > self.order2:
            raise ValueError("cannot extend a truncated series")
        return QSeries(self.coeffs, n)

    def first_difference(self, other: "QSeries"):
        """Lowest exponent where two series differ, or ``None``."""
        a, b = self._align(other)
        for k, (x, y) in enumerate(zip(a.coeffs, b.coeffs)):
            if x != y:
                return Fraction(k, 2)
        return None

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b = self._align(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        return hash(("QSeries", self.order2, self.coeffs))

    def __repr__(self) -> str:
        terms = []
        for e, c in self.items():
            terms.append(f"{rat_str(c)}*q^{rat_str(e)}")
        body = " + ".join(terms) if terms else "0"
        return f"QSeries({body} + O(q^{rat_str(self.order + Fraction(1, 2))}))"

    def to_json(self) -> dict:
        return {
            "order": rat_str(self.order),
            "coeffs": {rat_str(e): rat_str(c) for e, c in self.items()},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "QSeries":
        return cls.from_dict({rat(e): rat(c) for e, c in data["coeffs"].items()}, rat(data["order"]))


def q_pochhammer(start: int, count: int, order: Number, step: int = 1, sign: int = -1) -> QSeries:
    """``prod_{j=0}^{count-1} (1 + sign*q**(start + j*step))`` truncated.

    ``count=None`` is not supported; pass the number of factors that can
    matter, or use :func:`euler_phi`.
    """
    out = QSeries.one(order)
    n = _half_index(order)
    for j in range(count):
        e = start + j * step
        if 2 * e > n:
            break
        out = out + out.shift(e) * sign
    return out


def euler_phi(order: Number, i: int = None) -> QSeries:
    """``phi(q) = prod_{j>=1} (1 - q**j)`` or ``phi_i(q) = prod_{j=1}^i (1 - q**j)``."""
    n = _half_index(order)
    top = n // 2 if i is None else min(i, n // 2)
    return q_pochhammer(1, top, order)


def analytic_series(fn: str, scale: Number = 1, order: int = 0, i: int = None):
    """Exact truncated expansion of an elementary series.

    ``fn`` is ``exp``, ``cosh``, ``sinh`` or ``tanh`` (an :class:`XSeries` in
    ``x`` of ``fn(scale*x)``), or ``euler_phi`` / ``phi_i`` (a :class:`QSeries`;
    ``i`` gives the number of factors for ``phi_i``).
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    a = rat(scale)
    if fn == "exp":
        return XSeries.exp(a, order)
    if fn == "cosh":
        return XSeries(
            (a**n / factorial(n) if n % 2 == 0 else 0 for n in range(order + 1)), order
        )
    if fn == "sinh":
        return XSeries(
            (a**n / factorial(n) if n % 2 == 1 else 0 for n in range(order + 1)), order
        )
    if fn == "tanh":
        return analytic_series("sinh", a, order) / analytic_series("cosh", a, order)
    if fn == "euler_phi":
        return euler_phi(order)
    if fn == "phi_i":
        if i is None or i < 0:
            raise ValueError("phi_i needs a nonnegative index i")
        return euler_phi(order, i)
    raise ValueError(f"unknown series {fn!r}")


# ---------------------------------------------------------------------------
# Quasipolynomials
# ---------------------------------------------------------------------------

COSH, SINH = "cosh", "sinh"
Key = Tuple[str, Fraction]


class Quasipoly:
    """Finite sum of ``p(x) cosh(a x)`` and ``q(x) sinh(a x)`` terms.

    The canonical form keeps ``a >= 0`` (a negative ``a`` on a sinh term
    flips the sign of its polynomial), drops ``sinh(0*x)`` terms and drops
    zero polynomials.  Two quasipolynomials are equal iff their canonical
    forms are equal.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[Tuple[str, Number, Poly]] = ()):
        acc: Dict[Key, Poly] = {}
        for kind, alpha, p in terms:
            if kind not in (COSH, SINH):
                raise ValueError(f"unknown kind {kind!r}")
            alpha = rat(alpha)
            p = Poly._coerce(p)
            if alpha < 0:
                alpha = -alpha
                if kind == SINH:
                    p = -p
            if kind == SINH and alpha == 0:
                continue
            key = (kind, alpha)
            acc[key] = acc.get(key, Poly()) + p
        clean = {k: v for k, v in acc.items() if not v.is_zero()}
        object.__setattr__(self, "terms", dict(sorted(clean.items(), key=lambda kv: (kv[0][1], kv[0][0]))))

    def __setattr__(self, name, value):
        raise AttributeError("Quasipoly is immutable")

    @classmethod
    def cosh(cls, alpha: Number, p=1) -> "Quasipoly":
        return cls([(COSH, alpha, Poly._coerce(p))])

    @classmethod
    def sinh(cls, alpha: Number, p=1) -> "Quasipoly":
        return cls([(SINH, alpha, Poly._coerce(p))])

    @classmethod
    def exp(cls, beta: Number, p=1) -> "Quasipoly":
        """``p(x) * exp(beta x)``."""
        p = Poly._coerce(p)
        return cls([(COSH, beta, p), (SINH, beta, p)])

    @classmethod
    def from_exponential(cls, parts: Mapping[Number, Poly]) -> "Quasipoly":
        """Build from ``{beta: r_beta}`` meaning ``sum r_beta(x) exp(beta x)``."""
        out = cls()
        for beta, r in parts.items():
            out = out + cls.exp(beta, r)
        return out

    def exponential_form(self) -> Dict[Fraction, Poly]:
        """``{beta: r_beta}`` with ``self = sum r_beta(x) exp(beta x)``."""
        out: Dict[Fraction, Poly] = {}
        half = Fraction(1, 2)
        for (kind, alpha), p in self.terms.items():
            if alpha == 0:
                out[alpha] = out.get(alpha, Poly()) + p
                continue
            sgn = 1 if kind == COSH else -1
            out[alpha] = out.get(alpha, Poly()) + p * half
            out[-alpha] = out.get(-alpha, Poly()) + p * (half * sgn)
        return {b: r for b, r in sorted(out.items()) if not r.is_zero()}

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def cosh_terms(self) -> Dict[Fraction, Poly]:
        return {a: p for (k, a), p in self.terms.items() if k == COSH}

    def sinh_terms(self) -> Dict[Fraction, Poly]:
        return {a: p for (k, a), p in self.terms.items() if k == SINH}

    def is_even(self) -> bool:
        """Even as a function of ``x``."""
        for (kind, _a), p in self.terms.items():
            if kind == COSH and not p.is_even():
                return False
            if kind == SINH and not p.is_odd():
                return False
        return True

    def is_odd(self) -> bool:
        for (kind, _a), p in self.terms.items():
            if kind == COSH and not p.is_odd():
                return False
            if kind == SINH and not p.is_even():
                return False
        return True

    def at_zero(self) -> Fraction:
        return sum((p.coeff(0) for (k, _a), p in self.terms.items() if k == COSH), Fraction(0))

    # arithmetic ---------------------------------------------------------
    def _items(self):
        return [(k, a, p) for (k, a), p in self.terms.items()]

    def __add__(self, other: "Quasipoly") -> "Quasipoly":
        if not isinstance(other, Quasipoly):
            other = Quasipoly.cosh(0, Poly._coerce(other))
        return Quasipoly(self._items() + other._items())

    __radd__ = __add__

    def __neg__(self) -> "Quasipoly":
        return Quasipoly((k, a, -p) for k, a, p in self._items())

    def __sub__(self, other) -> "Quasipoly":
        return self + (-other if isinstance(other, Quasipoly) else -Poly._coerce(other))

    def __mul__(self, other) -> "Quasipoly":
        if isinstance(other, Quasipoly):
            half = Fraction(1, 2)
            out = []
            for k1, a1, p1 in self._items():
                for k2, a2, p2 in other._items():
                    pp = p1 * p2 * half
                    if k1 == COSH and k2 == COSH:
                        out += [(COSH, a1 + a2, pp), (COSH, a1 - a2, pp)]
                    elif k1 == SINH and k2 == SINH:
                        out += [(COSH, a1 + a2, pp), (COSH, a1 - a2, -pp)]
                    elif k1 == SINH:
                        out += [(SINH, a1 + a2, pp), (SINH, a1 - a2, pp)]
                    else:
                        out += [(SINH, a2 + a1, pp), (SINH, a2 - a1, pp)]
            return Quasipoly(out)
        p = Poly._coerce(other)
        return Quasipoly((k, a, q * p) for k, a, q in self._items())

    __rmul__ = __mul__

    def derivative(self) -> "Quasipoly":
        out = []
        for k, a, p in self._items():
            other = SINH if k == COSH else COSH
            out.append((k, a, p.derivative()))
            out.append((other, a, p * a))
        return Quasipoly(out)

    def apply_operator(self, b: Poly) -> "Quasipoly":
        """``b(d/dx)`` applied to ``self``."""
        out = Quasipoly()
        cur = self
        for c in b.coeffs:
            if c:
                out = out + cur * c
            cur = cur.derivative()
        return out

    def to_xseries(self, order: int) -> XSeries:
        out = XSeries([], order)
        for k, a, p in self._items():
            out = out + XSeries.from_poly(p, order) * analytic_series(k, a, order)
        return out

    def exponents(self) -> list:
        return sorted({a for (_k, a) in self.terms})

    # comparison ---------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, Quasipoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(("Quasipoly", tuple(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "Quasipoly(0)"
        parts = [f"({p.format('x')})*{k}({rat_str(a)}x)" for (k, a), p in self.terms.items()]
        return "Quasipoly(" + " + ".join(parts) + ")"

    def to_json(self) -> list:
        return [[k, rat_str(a), p.to_json()] for (k, a), p in self.terms.items()]

    @classmethod
    def from_json(cls, data: Sequence) -> "Quasipoly":
        return cls((k, rat(a), Poly.from_json(p)) for k, a, p in data)


def minimal_annihilator(F: Quasipoly, parity: str) -> Poly:
    """Monic polynomial ``b`` of the requested parity, of minimal degree,
    with ``b(d/dx) F = 0``.

    The annihilator ideal of ``sum r_beta(x) exp(beta x)`` is generated by
    ``prod (w - beta)**(deg r_beta + 1)``.  A parity-constrained annihilator
    must also be divisible by the reflected generator, so the answer is the
    symmetrized product with the power of ``w`` bumped to the right parity.
    ``F = 0`` returns ``1`` by convention (every polynomial annihilates it).
    """
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    if F.is_zero():
        return Poly.const(1)
    mult: Dict[Fraction, int] = {}
    for beta, r in F.exponential_form().items():
        mult[beta] = r.degree + 1
    out = Poly.const(1)
    seen = set()
    for beta in mult:
        a = abs(beta)
        if a in seen or a == 0:
            continue
        seen.add(a)
        e = max(mult.get(a, 0), mult.get(-a, 0))
        out = out * Poly([-a * a, 0, 1]) ** e
    z = mult.get(Fraction(0), 0)
    if parity == "even" and z % 2 == 1:
        z += 1
    if parity == "odd" and z % 2 == 0:
        z += 1
    return out * Poly.monomial(z)


def _squarefree(p: Poly) -> Poly:
    g = p.gcd(p.derivative())
    return (p // g).monic() if g.degree > 0 else p.monic()


def real_root_count(p: Poly) -> int:
    """Number of distinct real roots of ``p`` (Sturm's theorem, exact)."""
    if p.is_zero():
        raise ValueError("the zero polynomial has infinitely many roots")
    q = _squarefree(p)
    if q.degree <= 0:
        return 0
    chain = [q, q.derivative()]
    while chain[-1].degree > 0:
        r = chain[-2] % chain[-1]
        if r.is_zero():
            break
        chain.append(-r)

    def changes(signs):
        signs = [v for v in signs if v != 0]
        return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))

    at_plus = [c.lead for c in chain]
    at_minus = [c.lead * (-1 if c.degree % 2 else 1) for c in chain]
    return changes(at_minus) - changes(at_plus)


def _divisors(n: int) -> list:
    n = abs(n)
    small = [d for d in range(1, isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def rational_roots(p: Poly) -> Dict[Fraction, int]:
    """Rational roots of ``p`` with their multiplicities."""
    if p.is_zero():
        raise ValueError("the zero polynomial has infinitely many roots")
    out: Dict[Fraction, int] = {}
    v = p.valuation()
    if v:
        out[Fraction(0)] = v
    rest = Poly(p.coeffs[v:])
    den = 1
    for c in rest.coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in rest.coeffs]
    if len(ints) > 1:
        for a in _divisors(ints[0]):
            for b in _divisors(ints[-1]):
                for r in (Fraction(a, b), Fraction(-a, b)):
                    if r in out:
                        continue
                    lin = Poly([-r, 1])
                    k = 0
                    while lin.divides(rest):
                        rest = rest // lin
                        k += 1
                    if k:
                        out[r] = k
    return dict(sorted(out.items()))

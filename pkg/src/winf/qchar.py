"""q-characters of highest weight modules over the infinite rank classical
algebras, and the W-algebra character identities built from them.

Weights are sums of fundamental weights, ``Lambda_{n_1} + ... + Lambda_{n_k}
+ h Lambda_0``.  All characters are exact truncated :class:`QSeries`.
Infinite products are truncated by dropping factors whose lowest exponent
exceeds the order, which is exact to that order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from .exact import Number, QSeries, euler_phi, rat, rat_str

__all__ = [
    "FundWeightSum",
    "conjugate_partition",
    "factor",
    "qchar",
    "raw_weylkac_qchar",
    "hook_product",
    "young_factor",
    "d_terms_qchar",
    "d_epsilon_exponent",
    "c_qchar_naive",
    "walg_char",
    "wd_identity",
    "wb_identity",
]

HALF = Fraction(1, 2)


def _ov(m: int) -> int:
    """1 for even ``m``, 0 for odd ``m``."""
    return 1 if m % 2 == 0 else 0


def conjugate_partition(parts: Sequence[int]) -> List[int]:
    parts = [p for p in parts if p > 0]
    if not parts:
        return []
    return [sum(1 for p in parts if p >= i) for i in range(1, max(parts) + 1)]


@dataclass(frozen=True)
class FundWeightSum:
    """``Lambda = Lambda_{n_1} + ... + Lambda_{n_k} + h Lambda_0``.

    For ``gl`` the indices may be any integers (``Lambda_0`` terms are just
    zeros among them) and ``h`` adds that many more; for ``b``, ``c``, ``d``
    the indices are ``>= 1``.
    """

    algebra: str
    n: Tuple[int, ...] = ()
    h: int = 0

    def __post_init__(self):
        if self.algebra not in ("gl", "b", "c", "d"):
            raise ValueError(f"unknown algebra {self.algebra!r}")
        n = tuple(sorted((int(v) for v in self.n), reverse=True))
        if self.algebra == "gl":
            n = tuple(sorted(n + (0,) * int(self.h), reverse=True))
            object.__setattr__(self, "h", 0)
        elif any(v < 1 for v in n):
            raise ValueError("fundamental weight indices must be >= 1")
        if int(self.h) < 0:
            raise ValueError("h must be a nonnegative integer")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "h", int(self.h))

    @property
    def k(self) -> int:
        return len(self.n)

    @property
    def c(self) -> Fraction:
        k, h = self.k, self.h
        if self.algebra == "gl":
            return Fraction(k)
        if self.algebra == "b":
            return k + Fraction(h, 2)
        if self.algebra == "c":
            return Fraction(k + h)
        h1 = sum(1 for v in self.n if v == 1)
        return Fraction(h - h1, 2) + k

    def labels(self) -> List[int]:
        """``lambda_1, lambda_2, ...`` (the conjugate partition of ``n``)."""
        if self.algebra == "gl":
            raise ValueError("gl weights are described by their indices")
        return conjugate_partition(self.n)

    def to_json(self) -> dict:
        return {"algebra": self.algebra, "n": list(self.n), "h": self.h, "c": rat_str(self.c)}

    @classmethod
    def from_json(cls, data) -> "FundWeightSum":
        return cls(data["algebra"], tuple(data.get("n", ())), int(data.get("h", 0)))


# ---------------------------------------------------------------------------
# building blocks


def factor(a: Number, order: Number, sign: int = -1) -> QSeries:
    """``1 + sign * q**a`` (``a >= 0``)."""
    a = rat(a)
    if a < 0:
        raise ValueError("negative exponent in a product factor")
    return QSeries.one(order) + QSeries.monomial(a, order, sign)


def _phi(i: int, order: Number) -> QSeries:
    if i <= 0:
        return QSeries.one(order)
    return euler_phi(order, i)


def _q2_phi(order: Number) -> QSeries:
    """``phi(q^2)``."""
    out = QSeries.one(order)
    j = 1
    while 2 * j <= rat(order):
        out = out * factor(2 * j, order)
        j += 1
    return out


def _lam(lam: Sequence[int], i: int) -> int:
    return lam[i - 1] if 1 <= i <= len(lam) else 0


def young_factor(parts: Sequence[int], order: Number) -> QSeries:
    """``prod_{i<j<=k} (1 - q^{n_i-n_j+j-i}) / prod_i phi_{n_i+k-i}``."""
    n = sorted((p for p in parts if p > 0), reverse=True)
    k = len(n)
    num = QSeries.one(order)
    for i in range(k):
        for j in range(i + 1, k):
            num = num * factor(n[i] - n[j] + j - i, order)
    den = QSeries.one(order)
    for i in range(k):
        den = den * _phi(n[i] + k - (i + 1), order)
    return num / den


def hook_product(parts: Sequence[int], order: Number) -> QSeries:
    """``prod over cells of (1 - q^hook)^{-1}``."""
    n = sorted((p for p in parts if p > 0), reverse=True)
    conj = conjugate_partition(n)
    den = QSeries.one(order)
    for i, row in enumerate(n):
        for j in range(row):
            hook = (row - j - 1) + (conj[j] - i - 1) + 1
            den = den * factor(hook, order)
    return den.inverse()


def _ratio_product(pairs, order: Number) -> QSeries:
    """``prod (1 - q^a) / (1 - q^b)`` over the given exponent pairs."""
    num, den = QSeries.one(order), QSeries.one(order)
    for a, b in pairs:
        if a > order and b > order:
            continue
        num = num * factor(a, order)
        den = den * factor(b, order)
    return num / den


def _type_a_raw(lam: Sequence[int], order: Number) -> QSeries:
    """``prod_{1<=i<j} (1 - q^{l_i-l_j+j-i}) / (1 - q^{j-i})``."""
    top = len(lam)
    pairs = []
    for i in range(1, top + 1):
        for j in range(i + 1, top + int(rat(order)) + 2):
            pairs.append((_lam(lam, i) - _lam(lam, j) + j - i, j - i))
    return _ratio_product(pairs, order)


# ---------------------------------------------------------------------------
# raw Weyl-Kac products


def raw_weylkac_qchar(algebra: str, lam: Sequence[int], c: Number, order: Number) -> QSeries:
    """Principally specialized Weyl-Kac product over the positive coroots.

    ``lam`` lists ``lambda_1, lambda_2, ...`` (eventually zero) and ``c`` is
    the central charge.
    """
    c = rat(c)
    lam = list(lam)
    while lam and lam[-1] == 0:
        lam.pop()
    bound = int(rat(order)) + 2 * (lam[0] if lam else 0) + 2
    out = _type_a_raw(lam, order)
    if algebra == "b":
        pairs = []
        for i in range(0, bound + 1):
            for j in range(i + 1, bound + 1):
                pairs.append((2 * c - _lam(lam, i + 1) - _lam(lam, j) + j + i, i + j))
        return out * _ratio_product(pairs, order)
    if algebra == "c":
        pairs = [(c - _lam(lam, j) + j, j) for j in range(1, bound + 1)]
        for i in range(1, bound + 1):
            for j in range(i + 1, bound + 1):
                pairs.append((2 * c - _lam(lam, i) - _lam(lam, j) + i + j, i + j))
        return out * _ratio_product(pairs, order)
    raise ValueError("raw products are implemented for b and c")


# ---------------------------------------------------------------------------
# closed forms


def _gl_qchar(w: FundWeightSum, order: Number) -> QSeries:
    n, c = w.n, w.k
    num = QSeries.one(order)
    for i in range(c):
        for j in range(i + 1, c):
            num = num * factor(n[i] - n[j] + j - i, order)
    return num / euler_phi(order) ** c


def _tail_b(lam: Sequence[int], c2: int, n1: int, order: Number, shift_i: int) -> QSeries:
    """The last two products shared by the b, c and d closed forms."""
    out = QSeries.one(order)
    lo = 0
    hi = n1 - 1 if shift_i == 1 else n1
    for i in range(lo, hi + 1):
        li = _lam(lam, i + 1) if shift_i == 1 else _lam(lam, i)
        out = out * _phi(c2 + i + n1, order) / _phi(c2 + n1 + i - li, order)
    return out


def _b_qchar(w: FundWeightSum, order: Number) -> QSeries:
    lam = w.labels()
    c2 = int(2 * w.c)
    n1 = w.n[0] if w.n else 0
    out = young_factor(w.n, order)
    mid = _q2_phi(order) ** _ov(c2 + 1)
    j = 1
    while c2 - 2 * j > 0:
        mid = mid * _phi(c2 - 2 * j, order)
        j += 1
    out = out * mid / euler_phi(order) ** ((c2 + 1) // 2)
    out = out * _tail_b(lam, c2, n1, order, 1)
    pairs = []
    for i in range(0, n1 + 1):
        for j in range(i + 1, n1 + 1):
            pairs.append((c2 + j + i - _lam(lam, i + 1) - _lam(lam, j), c2 + j + i))
    return out * _ratio_product(pairs, order)


def _c_qchar(w: FundWeightSum, order: Number) -> QSeries:
    lam = w.labels()
    c = int(w.c)
    c2 = 2 * c
    n1 = w.n[0] if w.n else 0
    out = young_factor(w.n, order)
    mid = QSeries.one(order)
    for j in range(1, c + 1):
        mid = mid * _phi(2 * j, order)
    out = out * mid / euler_phi(order) ** c
    short = QSeries.one(order)
    for j in range(1, n1 + 1):
        short = short * factor(c + j - _lam(lam, j), order)
    out = out * short / _phi(c + n1, order)
    for i in range(1, n1 + 1):
        out = out * _phi(c2 + n1 + i, order) / _phi(c2 + n1 + i - _lam(lam, i), order)
    pairs = []
    for i in range(1, n1 + 1):
        for j in range(i + 1, n1 + 1):
            pairs.append((c2 + i + j - _lam(lam, i) - _lam(lam, j), c2 + i + j))
    return out * _ratio_product(pairs, order)


def c_qchar_naive(w: FundWeightSum, order: Number) -> QSeries:
    """The naive c-infinity closed form (with
    ``lambda_0 = 0``); kept to document that it differs from the Weyl-Kac
    product, e.g. for ``Lambda_0`` where it gives ``1/phi(q)``."""
    if w.algebra != "c":
        raise ValueError("c-infinity weights only")
    lam = w.labels()
    c = int(w.c)
    c2 = 2 * c
    n1 = w.n[0] if w.n else 0
    out = young_factor(w.n, order)
    mid = QSeries.one(order)
    for j in range(1, c):
        mid = mid * _phi(2 * j, order)
    out = out * mid / euler_phi(order) ** c
    out = out * _tail_b(lam, c2, n1, order, 0)
    pairs = []
    for i in range(0, n1 + 1):
        for j in range(i + 1, n1 + 1):
            pairs.append((c2 + i + j - _lam(lam, i + 1) - _lam(lam, j), c2 + i + j))
    return out * _ratio_product(pairs, order)


# d-infinity -------------------------------------------------------------

def d_epsilon_exponent(lam: Sequence[int], c: Number, j: int) -> Fraction:
    """``-(Lambda + rho, eps_j) = c + j - 1 - lambda_j`` for ``j >= 1``.

    This follows from ``(Lambda + rho, alpha_i) = h_i + 1`` on the simple
    roots ``alpha_0 = -eps_1 - eps_2`` and ``alpha_i = eps_i - eps_{i+1}``;
    it gives ``(rho, eps_j) = 1 - j`` and ``(Lambda, eps_j) = lambda_j - c``.
    Only ``j = 1`` can produce a negative exponent.
    """
    return rat(c) + j - 1 - _lam(lam, j)


def _drop_low(s: QSeries, k: Fraction, order: Number) -> QSeries:
    """``q**(-k) * s`` for a series ``s`` that vanishes below ``q**k``."""
    k2 = int(2 * k)
    if any(s.coeffs[:k2]):
        raise ArithmeticError("series does not vanish below the shift")
    return QSeries(s.coeffs[k2:], int(2 * rat(order)))


def _d_spinor_factor(lam: Sequence[int], c: Number, order: Number) -> QSeries:
    """``(prod_j (1 + q^y_j) + prod_j (1 - q^y_j)) / 2``.

    Only the even products survive, and ``y_1 + y_j > 0`` for ``j >= 2``,
    so the result is a power series even when ``y_1 < 0``.
    """
    y1 = d_epsilon_exponent(lam, c, 1)
    ext = rat(order) + max(-y1, 0)
    plus, minus = QSeries.one(ext), QSeries.one(ext)
    top = len(lam) + int(ext) + 2
    for j in range(2, top + 1):
        x = d_epsilon_exponent(lam, c, j)
        if x <= ext:
            plus = plus * factor(x, ext, 1)
            minus = minus * factor(x, ext, -1)
    even = (plus + minus) * HALF
    odd = (plus - minus) * HALF
    if y1 >= 0:
        return (even + odd.shift(y1)).truncate(order)
    return even.truncate(order) + _drop_low(odd, -y1, order)


def d_terms_qchar(lam: Sequence[int], c: Number, order: Number) -> QSeries:
    """The d-infinity character as the product over its positive roots
    (type ``(2,1,1,...)`` specialization) times the spinor factor."""
    c = rat(c)
    lam = list(lam)
    while lam and lam[-1] == 0:
        lam.pop()
    bound = int(rat(order)) + 2 * (lam[0] if lam else 0) + 2
    out = _type_a_raw(lam, order)
    pairs = []
    for i in range(0, bound + 1):
        for j in range(i + 1, bound + 1):
            pairs.append((2 * c - _lam(lam, i + 1) - _lam(lam, j + 1) + j + i, j + i + 1))
    return out * _ratio_product(pairs, order) * _d_spinor_factor(lam, c, order)


def _d_qchar(w: FundWeightSum, order: Number) -> QSeries:
    lam = w.labels()
    c = w.c
    c2 = int(2 * c)
    n1 = w.n[0] if w.n else 0
    out = young_factor(w.n, order)
    mid = QSeries.one(order)
    j = 1
    while c2 - 2 * j > 0:
        mid = mid * _phi(c2 - 2 * j, order)
        j += 1
    fl = c2 // 2
    out = out * mid / (_q2_phi(order) ** _ov(c2) * euler_phi(order) ** (fl - _ov(c2)))
    out = out * _tail_b(lam, c2, n1, order, 1)
    pairs = []
    for i in range(0, n1 + 1):
        for j in range(i + 1, n1 + 1):
            pairs.append((c2 + j + i - _lam(lam, i + 1) - _lam(lam, j + 1), c2 + j + i))
    return out * _ratio_product(pairs, order) * _d_spinor_factor(lam, c, order)


def qchar(w: FundWeightSum, order: Number) -> QSeries:
    """Closed-form q-character of the module with highest weight ``w``."""
    if rat(order) < 0:
        raise ValueError("order must be >= 0")
    if w.algebra == "gl":
        return _gl_qchar(w, order)
    if w.algebra == "b":
        return _b_qchar(w, order)
    if w.algebra == "c":
        return _c_qchar(w, order)
    return _d_qchar(w, order)


# ---------------------------------------------------------------------------
# W-algebras


def walg_char(kind: str, l: int, order: Number) -> QSeries:
    """``WD``: ``prod_i prod_{n<=e_i} (1-q^n) / phi(q)^l`` with the exponents
    of ``so(2l)``.  ``WB-super``: the ``B_l`` exponents and an extra factor
    ``prod_{n>=1} (1 + q^{n+l-1/2})``."""
    if l < 1:
        raise ValueError("l must be >= 1")
    if kind == "WD":
        exps = [2 * i - 1 for i in range(1, l)] + [l - 1]
    elif kind == "WB-super":
        exps = [2 * i - 1 for i in range(1, l + 1)]
    else:
        raise ValueError(f"unknown W-algebra kind {kind!r}")
    out = QSeries.one(order)
    for e in exps:
        out = out * _phi(e, order)
    out = out / euler_phi(order) ** l
    if kind == "WB-super":
        n = 1
        while n + l - HALF <= rat(order):
            out = out * factor(n + l - HALF, order, 1)
            n += 1
    return out


def wd_identity(l: int, order: Number) -> Tuple[QSeries, QSeries]:
    """Both sides of ``ch(2l Lambda_0) + q^l ch(2l Lambda_1) = ch WD_l``."""
    lhs = qchar(FundWeightSum("d", (), 2 * l), order)
    lhs = lhs + qchar(FundWeightSum("d", (1,) * (2 * l), 0), order).shift(l)
    return lhs, walg_char("WD", l, order)


def wb_identity(l: int, order: Number) -> Tuple[QSeries, QSeries]:
    """Both sides of the ``(2l+1) Lambda_0`` / ``(2l+1) Lambda_1`` identity."""
    lhs = qchar(FundWeightSum("d", (), 2 * l + 1), order)
    lhs = lhs + qchar(FundWeightSum("d", (1,) * (2 * l + 1), 0), order).shift(l + HALF)
    return lhs, walg_char("WB-super", l, order)

"""Named verification suites.

Each criterion is a function returning a :class:`Result`; ``acceptance``
runs all of them in a fixed order.  The heavier Fock-space criteria are
split into independent jobs which run in worker processes when the
``WINF_THREADS`` environment variable allows more than one.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable, Dict, List, Sequence

from .dhat import (
    DOp,
    bracket,
    cocycle,
    cocycle_residue,
    parabolic_closure,
    random_dop,
    random_member,
    random_parabolic_generators,
    verify_char_divisibility,
    virasoro,
)
from .exact import Poly, rat_str
from .glhat import classical_membership, hat_phi, phi, window_bracket
from .hweight import delta_from_spectrum, random_spectrum, spectrum_from_delta
from .qchar import FundWeightSum, hook_product, qchar, raw_weylkac_qchar, wb_identity, wd_identity, young_factor

__all__ = ["Result", "SUITES", "ACCEPTANCE", "run_suite", "worker_count"]


@dataclass
class Result:
    name: str
    passed: bool
    checked: int = 0
    failures: List[str] = field(default_factory=list)
    detail: Dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "failures": self.failures[:20],
            "detail": self.detail,
        }

    def line(self) -> str:
        word = "PASS" if self.passed else "FAIL"
        return f"{word}  {self.name}  ({self.checked} checks)"


def worker_count() -> int:
    """Workers allowed by ``WINF_THREADS`` (default 1, capped by the CPU count)."""
    raw = os.environ.get("WINF_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"WINF_THREADS must be an integer, got {raw!r}")
    return max(1, min(n, os.cpu_count() or 1))


def _map(fn: Callable, jobs: Sequence) -> list:
    """Order-preserving map, in worker processes when allowed."""
    n = worker_count()
    if n == 1 or len(jobs) < 2:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, jobs))


def _finish(name: str, checked: int, failures: List[str], **detail) -> Result:
    return Result(name, not failures, checked, failures, detail)


# ---------------------------------------------------------------------------
# D-hat


def virasoro_relation(bound: int = 5) -> Result:
    """``[W^1_m, W^1_n] = (m-n) W^1_{m+n} + delta (m^3-m)/12 C``."""
    failures, n_checked = [], 0
    for m in range(-bound, bound + 1):
        for n in range(-bound, bound + 1):
            want = virasoro(m + n) * (m - n)
            if m + n == 0:
                want = want + DOp.C(Fraction(m**3 - m, 12))
            got = bracket(virasoro(m), virasoro(n))
            n_checked += 1
            if got != want:
                failures.append(f"m={m} n={n}: {got!r}")
    return _finish("virasoro-relation", n_checked, failures)


def cocycle_equivalence(rmax: int = 8, dmax: int = 8) -> Result:
    """Finite-sum cocycle against the residue form on monomials."""
    failures, n_checked = [], 0
    for r in range(-rmax, rmax + 1):
        for s in range(-rmax, rmax + 1):
            for i in range(dmax + 1):
                a = DOp.t(r, Poly.monomial(i))
                for j in range(dmax + 1):
                    b = DOp.t(s, Poly.monomial(j))
                    n_checked += 1
                    x, y = cocycle(a, b), cocycle_residue(a, b)
                    if x != y:
                        failures.append(f"t^{r}D^{i}, t^{s}D^{j}: {x} vs {y}")
    return _finish("cocycle-equivalence", n_checked, failures)


def jacobi(count: int = 200, seed: int = 1) -> Result:
    rng = random.Random(seed)
    failures = []
    for t in range(count):
        a, b, c = (random_dop(rng, 6, 4) for _ in range(3))
        total = bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b))
        if not total.is_zero():
            failures.append(f"triple {t}: {total!r}")
    return _finish("jacobi", count, failures)


# ---------------------------------------------------------------------------
# gl-hat


def homomorphism(count: int = 100, N: int = 12, seed: int = 2) -> Result:
    """``hat phi_s([a, b]) = [hat phi_s(a), hat phi_s(b)]`` with cocycles."""
    rng = random.Random(seed)
    failures, n_checked = [], 0
    for s in (Fraction(0), Fraction(1, 2), Fraction(-1, 2), Fraction(1, 3)):
        for m in (0, 1, 2):
            for t in range(count):
                a = random_dop(rng, 4, 3)
                b = random_dop(rng, 4, 3)
                lhs = window_bracket(hat_phi(s, m, a, N), hat_phi(s, m, b, N))
                rhs = hat_phi(s, m, bracket(a, b), N).restrict(lhs.N)
                n_checked += 1
                if lhs.entries != rhs.entries or lhs.central != rhs.central:
                    failures.append(f"s={s} m={m} pair {t}")
    return _finish("homomorphism", n_checked, failures)


_IMAGES = (
    ("-", 0, "minus", "b-"),
    ("-", Fraction(1, 2), "minus", "c"),
    ("+", 0, "plus", "d"),
    ("+", Fraction(-1, 2), "plus", "b+"),
)


def classical_images(count: int = 100, N: int = 12, m: int = 2, seed: int = 3) -> Result:
    rng = random.Random(seed)
    failures, n_checked = [], 0
    for sign, s, variant, kind in _IMAGES:
        for t in range(count):
            a = random_member(rng, sign)
            n_checked += 1
            if not classical_membership(kind, phi(s, m, variant, a, N)):
                failures.append(f"phi_{s} of D{sign} element {t} not in {kind}")
    return _finish("classical-images", n_checked, failures)


# ---------------------------------------------------------------------------
# highest weights


def delta_round_trip(count: int = 100, seed: int = 4) -> Result:
    rng = random.Random(seed)
    failures = []
    for t in range(count):
        sign = "-" if t % 2 == 0 else "+"
        sp = random_spectrum(rng, sign)
        back = spectrum_from_delta(delta_from_spectrum(sp))
        if back != sp:
            failures.append(f"spectrum {t} not recovered")
        total = sum((p.coeff(0) for p in back.even.values()), Fraction(0))
        if total != back.c:
            failures.append(f"spectrum {t}: sum p(0) = {total}, c = {back.c}")
    return _finish("delta-round-trip", count, failures)


# ---------------------------------------------------------------------------
# characters


def _index_tuples(kmax: int, nmax: int):
    for k in range(kmax + 1):
        for n in combinations_with_replacement(range(nmax, 0, -1), k):
            yield n


def character_identities(order: int = 20, kmax: int = 3, nmax: int = 4, hmax: int = 3) -> Result:
    failures, n_checked = [], 0
    for alg in ("b", "c"):
        for n in _index_tuples(kmax, nmax):
            for h in range(hmax + 1):
                w = FundWeightSum(alg, n, h)
                raw = raw_weylkac_qchar(alg, w.labels(), w.c, order)
                closed = qchar(w, order)
                n_checked += 1
                if raw != closed:
                    failures.append(f"{alg} n={n} h={h}: first difference at {closed.first_difference(raw)}")
    for n in _index_tuples(kmax, nmax):
        n_checked += 1
        if young_factor(n, order) != hook_product(n, order):
            failures.append(f"hook identity fails for {n}")
    return _finish("character-identities", n_checked, failures)


def walg_identities(order: int = 15) -> Result:
    failures, n_checked = [], 0
    for l in (1, 2, 3):
        lhs, rhs = wd_identity(l, order)
        n_checked += 1
        if lhs != rhs:
            failures.append(f"WD l={l}: first difference at {lhs.first_difference(rhs)}")
    for l in (1, 2):
        lhs, rhs = wb_identity(l, order)
        n_checked += 1
        if lhs != rhs:
            failures.append(f"WB l={l}: first difference at {lhs.first_difference(rhs)}")
    return _finish("walg-identities", n_checked, failures)


# ---------------------------------------------------------------------------
# Fock spaces (jobs are module-level so that they pickle)


def _virasoro_job(job):
    from .fock import realization, virasoro_check

    name, l, cutoff = job
    rep = virasoro_check(realization(name, l), cutoff)
    return name, l, rep["ok"], rep["central_charge"], rep["expected"]


def fock_virasoro(cutoff: int = 4, ls: Sequence[int] = (0, 1, 2), names: Sequence[str] = None) -> Result:
    from .fock import REALIZATIONS

    names = list(names or REALIZATIONS)
    jobs = [(name, l, cutoff) for name in names for l in ls]
    failures, charges = [], {}
    for name, l, ok, c, expected in _map(_virasoro_job, jobs):
        charges[f"{name} l={l}"] = c
        if not ok or c != expected:
            failures.append(f"{name} l={l}: c = {c}, expected {expected}")
    return _finish("fock-virasoro", len(jobs), failures, central_charges=charges)


def _locality_job(job):
    from .fock import locality_check, realization

    name, l, m, n, cutoff = job
    return name, m, n, locality_check(realization(name, l), m, n, cutoff)


def locality(cutoff: int = 5, psi_max: int = 6) -> Result:
    from .fock import psi_reduction

    jobs = [("Fl-dplus", 1, m, n, cutoff) for m, n in ((1, 1), (1, 3), (3, 3))]
    failures = []
    for name, m, n, ok in _map(_locality_job, jobs):
        if not ok:
            failures.append(f"{name}: (z-w)^{m + n + 2}[W^{m}, W^{n}] != 0")
    n_checked = len(jobs)
    table = {}
    for total in range(psi_max + 1):
        for m in range(total + 1):
            n = total - m
            try:
                a, b = psi_reduction(m, n), psi_reduction(n, m)
            except ValueError as exc:
                failures.append(f"psi({m},{n}): {exc}")
                continue
            n_checked += 1
            if a != {i: -v for i, v in b.items()}:
                failures.append(f"psi({m},{n}) is not minus psi({n},{m})")
            table[f"{m},{n}"] = {str(i): rat_str(v) for i, v in sorted(a.items())}
    return _finish("locality", n_checked, failures, psi_reduction=table)


_DUALITY_JOBS = (
    ("Sp2l-dminus", 1, 8),
    ("O2l-dplus", 1, 6),
    ("Sp2l-dplus", 1, 6),
    ("O2l1-dplus", 1, 5),
)


def _duality_job(job):
    from .fock import dual_decomposition_check

    pair, l, cutoff = job
    rep = dual_decomposition_check(pair, l, cutoff)
    return pair, l, cutoff, rep["equal"], rep["first_mismatch"]


def duality(jobs: Sequence = _DUALITY_JOBS) -> Result:
    failures = []
    for pair, l, cutoff, equal, mismatch in _map(_duality_job, list(jobs)):
        if not equal:
            failures.append(f"{pair} l={l} cutoff {cutoff}: first mismatch {mismatch}")
    return _finish("duality", len(jobs), failures)


# ---------------------------------------------------------------------------
# parabolic subalgebras


def char_divisibility(count: int = 50, depth: int = 4, seed: int = 5) -> Result:
    rng = random.Random(seed)
    failures = []
    for t in range(count):
        sign = "-" if t % 2 == 0 else "+"
        gens = random_parabolic_generators(rng, sign, depth)
        b = parabolic_closure(sign, gens, depth)
        rep = verify_char_divisibility(b, sign)
        if not rep.ok:
            failures.append(f"data set {t} ({sign}): {[c.name for c in rep.failures()]}")
    return _finish("char-divisibility", count, failures)


# ---------------------------------------------------------------------------

ACCEPTANCE = [
    virasoro_relation,
    cocycle_equivalence,
    jacobi,
    homomorphism,
    classical_images,
    delta_round_trip,
    character_identities,
    walg_identities,
    fock_virasoro,
    locality,
    duality,
    char_divisibility,
]

SUITES: Dict[str, Callable[[], Result]] = {fn.__name__.replace("_", "-"): fn for fn in ACCEPTANCE}


def run_suite(name: str) -> List[Result]:
    """Run a named suite; ``acceptance`` runs every criterion in order."""
    if name == "acceptance":
        return [fn() for fn in ACCEPTANCE]
    if name not in SUITES:
        raise KeyError(name)
    return [SUITES[name]()]

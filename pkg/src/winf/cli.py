"""Command-line front end.

Every subcommand reads its structured input as JSON (an inline object, a
path, or ``-`` for stdin) plus a few scalar flags, and writes one JSON
document.  Exit status: 0 on success, 1 when a verification fails, 2 on
malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, Mapping, Optional

from . import dhat, fock, glhat, hweight, qchar, suites
from .exact import Poly, QSeries, Quasipoly, rat, rat_str


class UsageError(Exception):
    """Malformed input; the message names the offending field."""


class Payload:
    """Result document plus the verdict that decides the exit status."""

    def __init__(self, data: Any, ok: bool = True, text: Optional[str] = None):
        self.data = data
        self.ok = ok
        self.text = text


# ---------------------------------------------------------------------------
# input helpers


def _load_input(raw: Optional[str]) -> dict:
    if raw is None:
        return {}
    if raw == "-":
        text = sys.stdin.read()
    elif raw.lstrip().startswith(("{", "[")):
        text = raw
    else:
        path = Path(raw)
        if not path.exists():
            raise UsageError(f"input: no such file {raw!r}")
        text = path.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"input: invalid JSON ({exc.msg} at line {exc.lineno})")
    if not isinstance(data, dict):
        raise UsageError("input: expected a JSON object")
    return data


def _get(data: Mapping, name: str, conv: Callable = lambda x: x, default: Any = ...):
    if name not in data or data[name] is None:
        if default is ...:
            raise UsageError(f"{name}: missing field")
        return default
    try:
        return conv(data[name])
    except UsageError:
        raise
    except (TypeError, ValueError, KeyError, IndexError, ZeroDivisionError, AttributeError) as exc:
        raise UsageError(f"{name}: {exc}")


def _merge(args, data: dict, *names: str) -> dict:
    """Flags override fields of the input object."""
    out = dict(data)
    for name in names:
        value = getattr(args, name.replace("-", "_"), None)
        if value is not None:
            out[name] = value
    return out


def _ratio(value) -> Fraction:
    if isinstance(value, bool):
        raise ValueError("expected a rational number")
    return rat(value)


def _int(value) -> int:
    if isinstance(value, bool):
        raise ValueError("expected an integer")
    if isinstance(value, str):
        value = value.strip()
    out = rat(value)
    if out.denominator != 1:
        raise ValueError(f"expected an integer, got {value}")
    return int(out)


def _int_list(value) -> tuple:
    if isinstance(value, str):
        return tuple(_int(v) for v in value.replace(",", " ").split())
    return tuple(_int(v) for v in value)


def _dop(value) -> dhat.DOp:
    if not isinstance(value, Mapping):
        raise ValueError("expected an object with 'terms' and 'central'")
    return dhat.DOp.from_json(value)


def _poly(value) -> Poly:
    if not isinstance(value, (list, tuple)):
        raise ValueError("expected a coefficient list (constant term first)")
    return Poly.from_json(value)


def _sign(value) -> str:
    if value not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    return value


def jsonable(obj):
    """Exact rationals become strings; polynomials become coefficient lists."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return rat_str(obj)
    if hasattr(obj, "to_json"):
        return jsonable(obj.to_json())
    if isinstance(obj, Mapping):
        return {(k if isinstance(k, str) else jsonable(k) if not isinstance(k, (int, Fraction)) else rat_str(k)): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _series_payload(series: QSeries) -> dict:
    """``{order, coeffs}``: a list when every exponent is an integer, else a
    map keyed by exponent strings such as ``"3/2"``."""
    if all(e.denominator == 1 for e, _ in series.items()):
        top = int(series.order)
        coeffs = [series[n] for n in range(top + 1)]
        if all(c.denominator == 1 for c in coeffs):
            return {"order": rat_str(series.order), "coeffs": [int(c) for c in coeffs]}
        return {"order": rat_str(series.order), "coeffs": [rat_str(c) for c in coeffs]}
    return series.to_json()


# ---------------------------------------------------------------------------
# commands


def cmd_bracket(args, data):
    a, b = _get(data, "a", _dop), _get(data, "b", _dop)
    return Payload(dhat.bracket(a, b).to_json())


def cmd_cocycle(args, data):
    a, b = _get(data, "a", _dop), _get(data, "b", _dop)
    x, y = dhat.cocycle(a, b), dhat.cocycle_residue(a, b)
    return Payload({"cocycle": rat_str(x), "residue": rat_str(y), "agree": x == y}, ok=x == y)


def cmd_involution(args, data):
    data = _merge(args, data, "sign")
    tag = dhat.InvolutionTag(_get(data, "sign", _sign), _get(data, "b", _ratio, Fraction(0)))
    a = _get(data, "a", _dop)
    if a.central != 0:
        raise UsageError("a: the anti-involution acts on central-free elements")
    return Payload(dhat.anti_involution(tag, a).to_json())


def cmd_basis(args, data):
    data = _merge(args, data, "kind", "n", "s", "k")
    kind = _get(data, "kind")
    if kind not in ("T", "W"):
        raise UsageError("kind: expected 'T' or 'W'")
    n = _get(data, "n", _int)
    if n < 1:
        raise UsageError("n: basis index must be >= 1")
    return Payload(dhat.basis_element(kind, n, _get(data, "s", _ratio), _get(data, "k", _int)).to_json())


def cmd_charpoly(args, data):
    data = _merge(args, data, "sign")
    if "seq" in data:
        seq = _get(data, "seq", lambda v: {_int(k): _poly(p) for k, p in v.items()})
        rep = dhat.verify_char_divisibility(seq, _get(data, "sign", _sign))
        return Payload(rep.to_json(), ok=rep.ok)
    gens = _get(data, "gens", lambda v: [_poly(p) for p in v])
    parity = _get(data, "parity", default=None)
    if parity is None:
        parity = dhat.char_parity(_get(data, "sign", _sign), _get(data, "k", _int))
    try:
        g = dhat.char_poly_of_ideal(gens, parity)
    except ValueError as exc:
        raise UsageError(f"gens: {exc}")
    return Payload({"char_poly": g.to_json()})


def _phi_args(args, data):
    data = _merge(args, data, "s", "m", "window", "variant")
    s = _get(data, "s", _ratio)
    m = _get(data, "m", _int)
    N = _get(data, "window", _int)
    if m < 0:
        raise UsageError("m: truncation order must be >= 0")
    if N < 0:
        raise UsageError("window: half-width must be >= 0")
    variant = _get(data, "variant", default="general")
    if variant not in ("general", "minus", "plus"):
        raise UsageError("variant: expected general, minus or plus")
    return data, s, m, N, variant


def cmd_phi(args, data):
    data, s, m, N, variant = _phi_args(args, data)
    a = _get(data, "a", _dop)
    try:
        w = glhat.hat_phi(s, m, a, N, variant)
    except ValueError as exc:
        raise UsageError(f"a: {exc}")
    return Payload(w.to_json())


def cmd_phi_verify(args, data):
    data, s, m, N, variant = _phi_args(args, data)
    a, b = _get(data, "a", _dop), _get(data, "b", _dop)
    try:
        lhs = glhat.window_bracket(glhat.hat_phi(s, m, a, N, variant), glhat.hat_phi(s, m, b, N, variant))
    except ValueError as exc:
        raise UsageError(f"window: {exc}")
    rhs = glhat.hat_phi(s, m, dhat.bracket(a, b), N).restrict(lhs.N)
    ok = lhs.entries == rhs.entries and lhs.central == rhs.central
    out = {"window": lhs.N, "homomorphism": ok}
    kind = _get(data, "kind", default=None)
    if kind is not None:
        try:
            both = [glhat.classical_membership(kind, glhat.phi(s, m, variant, x.noncentral(), N)) for x in (a, b)]
        except ValueError as exc:
            raise UsageError(f"kind: {exc}")
        out["classical"] = all(both)
        ok = ok and all(both)
    return Payload(out, ok=ok)


def cmd_labels(args, data):
    algebra = _get(data, "algebra")
    diag = _get(data, "diag", lambda v: {_int(k): list(x) for k, x in v.items()})
    central = _get(data, "central", list, [0])
    try:
        out = glhat.labels_from_weight(algebra, diag, central)
    except (ValueError, KeyError) as exc:
        raise UsageError(f"diag: {exc}")
    return Payload(jsonable(out))


def _spectrum(value) -> hweight.Spectrum:
    if not isinstance(value, Mapping):
        raise ValueError("expected a spectrum object")
    return hweight.Spectrum.from_json(value)


def cmd_spectrum(args, data):
    data = _merge(args, data, "sign", "s", "m")
    if "map" in data:
        m = _get(data, "m", _int)
        labels = _get(data, "labels", lambda v: {_int(k): list(x) for k, x in v.items()})
        try:
            sp = hweight.spectrum_from_labels(data["map"], _get(data, "s", _ratio), m, labels, _get(data, "central", list))
        except ValueError as exc:
            raise UsageError(f"labels: {exc}")
        return Payload(sp.to_json())
    if "spectrum" in data:
        sp = _get(data, "spectrum", _spectrum)
        w = hweight.delta_from_spectrum(sp)
        nmax = _get(data, "nmax", _int, 7)
        return Payload({"weight": w.to_json(), "labels": {str(n): rat_str(v) for n, v in w.labels(nmax).items()}})
    sign = _get(data, "sign", _sign)
    c = _get(data, "c", _ratio)
    if "F" in data:
        w = hweight.HWeight(sign, c, _get(data, "F", Quasipoly.from_json))
    else:
        labels = _get(data, "labels", lambda v: {_int(k): _ratio(x) for k, x in v.items()})
        try:
            w = hweight.HWeight.from_labels(sign, labels, c)
        except ValueError as exc:
            raise UsageError(f"labels: {exc}")
    try:
        sp = hweight.spectrum_from_delta(w)
    except hweight.QuasifiniteError as exc:
        return Payload({"quasifinite": False, "reason": str(exc)}, ok=False)
    return Payload(sp.to_json())


def _spectrum_input(data) -> hweight.Spectrum:
    if "spectrum" in data:
        return _get(data, "spectrum", _spectrum)
    return _get({"spectrum": data}, "spectrum", _spectrum)


def cmd_classify(args, data):
    return Payload(hweight.classify(_spectrum_input(data)).to_json())


def cmd_realize(args, data):
    sp = _spectrum_input(data)
    sign = args.sign or (data.get("sign") if "spectrum" in data else None)
    try:
        out = hweight.realize_partition(sp, sign)
    except ValueError as exc:
        raise UsageError(f"spectrum: {exc}")
    return Payload(out.to_json())


def _order(args) -> Fraction:
    if args.order is None:
        raise UsageError("order: the truncation order is mandatory")
    o = _get({"order": args.order}, "order", _ratio)
    if o < 0:
        raise UsageError("order: must be >= 0")
    return o


def cmd_qchar(args, data):
    order = _order(args)
    data = _merge(args, data, "algebra", "n", "h")
    try:
        w = qchar.FundWeightSum(_get(data, "algebra"), _get(data, "n", _int_list, ()), _get(data, "h", _int, 0))
    except ValueError as exc:
        raise UsageError(f"weight: {exc}")
    out = _series_payload(qchar.qchar(w, order))
    out["weight"] = w.to_json()
    return Payload(out)


def cmd_walg_char(args, data):
    order = _order(args)
    data = _merge(args, data, "kind", "l")
    kind = _get(data, "kind")
    if kind not in ("WD", "WB-super"):
        raise UsageError("kind: expected WD or WB-super")
    l = _get(data, "l", _int)
    if l < 1:
        raise UsageError("l: must be >= 1")
    return Payload(_series_payload(qchar.walg_char(kind, l, order)))


def cmd_qchar_identities(args, data):
    order = _order(args)
    data = _merge(args, data, "l")
    ls = [_get(data, "l", _int)] if "l" in data else [1, 2, 3]
    rows, ok = [], True
    for l in ls:
        if l < 1:
            raise UsageError("l: must be >= 1")
        for name, fn in (("WD", qchar.wd_identity), ("WB-super", qchar.wb_identity)):
            lhs, rhs = fn(l, order)
            eq = lhs == rhs
            ok = ok and eq
            rows.append({"identity": name, "l": l, "equal": eq, "lhs": lhs.to_json(), "rhs": rhs.to_json()})
    return Payload({"order": rat_str(order), "identities": rows}, ok=ok)


def _realization(data) -> fock.Realization:
    name = _get(data, "realization")
    l = _get(data, "l", _int)
    if l < 0:
        raise UsageError("l: must be >= 0")
    try:
        return fock.realization(name, l)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"realization: {exc}")


def _cutoff(args, data) -> Fraction:
    data = _merge(args, data, "cutoff")
    c = _get(data, "cutoff", _ratio)
    if c < 0:
        raise UsageError("cutoff: must be >= 0")
    return c


def cmd_fock_char(args, data):
    data = _merge(args, data, "realization", "l")
    r = _realization(data)
    rank = _get(data, "torus_rank", _int, None)
    ch = fock.graded_character(r, _cutoff(args, data), rank)
    return Payload({"realization": r.name, "l": r.l, "cutoff": rat_str(_cutoff(args, data)), "terms": ch.to_json(),
                    "specialized": ch.specialize().to_json()})


def cmd_virasoro(args, data):
    data = _merge(args, data, "realization", "l")
    r = _realization(data)
    cutoff = _cutoff(args, data)
    if cutoff < 2:
        raise UsageError("cutoff: must be >= 2")
    rep = fock.virasoro_check(r, cutoff)
    return Payload(jsonable(rep), ok=rep["ok"])


def cmd_locality(args, data):
    data = _merge(args, data, "realization", "l", "m", "n")
    r = _realization(data)
    m, n = _get(data, "m", _int), _get(data, "n", _int)
    for name, v in (("m", m), ("n", n)):
        if v < 1 or v % 2 == 0:
            raise UsageError(f"{name}: must be a positive odd integer")
    cutoff = _cutoff(args, data)
    try:
        ok = fock.locality_check(r, m, n, cutoff)
    except ValueError as exc:
        raise UsageError(f"realization: {exc}")
    return Payload({"realization": r.name, "l": r.l, "m": m, "n": n, "cutoff": rat_str(cutoff), "local": ok}, ok=ok)


def cmd_psi_reduce(args, data):
    data = _merge(args, data, "m", "n")
    m, n = _get(data, "m", _int), _get(data, "n", _int)
    if m < 0 or n < 0:
        raise UsageError("m: indices must be >= 0")
    try:
        coeffs = fock.psi_reduction(m, n)
    except ValueError as exc:
        return Payload({"m": m, "n": n, "consistent": False, "reason": str(exc)}, ok=False)
    return Payload({"m": m, "n": n, "consistent": True, "coefficients": {str(i): rat_str(v) for i, v in sorted(coeffs.items())}})


def cmd_duality(args, data):
    data = _merge(args, data, "pair", "l")
    pair = _get(data, "pair")
    l = _get(data, "l", _int)
    cutoff = _cutoff(args, data)
    try:
        rep = fock.dual_decomposition_check(pair, l, cutoff)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"pair: {exc}")
    return Payload(jsonable(rep), ok=rep["equal"])


def cmd_singular(args, data):
    data = _merge(args, data, "realization", "l")
    r = _realization(data)
    vec = _get(data, "vector", fock.StateSum.from_json)
    for st in vec.terms:
        for mode, _ in st.modes:
            try:
                r.system.check_mode(mode)
            except (KeyError, ValueError) as exc:
                raise UsageError(f"vector: {exc}")
            if r.system.is_annihilator(mode):
                raise UsageError(f"vector: {mode} is an annihilation mode")
    ok = fock.singular_check(r, vec, _get(data, "nmax", _int, None))
    return Payload({"realization": r.name, "l": r.l, "singular": ok}, ok=ok)


def cmd_suite(args, data):
    name = args.name
    if name != "acceptance" and name not in suites.SUITES:
        raise UsageError(f"name: unknown suite {name!r} (choose from acceptance, {', '.join(suites.SUITES)})")
    results = suites.run_suite(name)
    ok = all(r.passed for r in results)
    text = "\n".join(r.line() for r in results)
    return Payload({"suite": name, "passed": ok, "results": [r.to_json() for r in results]}, ok=ok, text=text)


COMMANDS: Dict[str, Callable] = {
    "bracket": cmd_bracket,
    "cocycle": cmd_cocycle,
    "involution": cmd_involution,
    "basis": cmd_basis,
    "charpoly": cmd_charpoly,
    "phi": cmd_phi,
    "phi-verify": cmd_phi_verify,
    "labels": cmd_labels,
    "spectrum": cmd_spectrum,
    "classify": cmd_classify,
    "realize": cmd_realize,
    "qchar": cmd_qchar,
    "walg-char": cmd_walg_char,
    "qchar-identities": cmd_qchar_identities,
    "fock-char": cmd_fock_char,
    "virasoro": cmd_virasoro,
    "locality": cmd_locality,
    "psi-reduce": cmd_psi_reduce,
    "duality": cmd_duality,
    "singular": cmd_singular,
    "suite": cmd_suite,
}

_FLAGS = {
    "involution": ["sign"],
    "basis": ["kind", "n", "s", "k"],
    "charpoly": ["sign"],
    "phi": ["s", "m", "window", "variant"],
    "phi-verify": ["s", "m", "window", "variant"],
    "spectrum": ["sign", "s", "m"],
    "realize": ["sign"],
    "qchar": ["order", "algebra", "n", "h"],
    "walg-char": ["order", "kind", "l"],
    "qchar-identities": ["order", "l"],
    "fock-char": ["realization", "l", "cutoff"],
    "virasoro": ["realization", "l", "cutoff"],
    "locality": ["realization", "l", "m", "n", "cutoff"],
    "psi-reduce": ["m", "n"],
    "duality": ["pair", "l", "cutoff"],
    "singular": ["realization", "l"],
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON document to this path")
    common.add_argument("--format", choices=["json", "text"], default="json")
    parser = argparse.ArgumentParser(prog="winf", description="Exact computations for W-infinity algebras.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "suite":
            p.add_argument("name")
            continue
        p.add_argument("input", nargs="?", help="JSON object, a path to one, or - for stdin")
        for flag in _FLAGS.get(name, []):
            if flag == "sign":
                p.add_argument("--sign", choices=["+", "-"])
            elif flag == "n":
                p.add_argument("--n", help="integer, or a space/comma separated list for qchar")
            else:
                p.add_argument(f"--{flag}")
    return parser


def _render_text(payload: Payload) -> str:
    if payload.text is not None:
        return payload.text
    data = payload.data
    if isinstance(data, dict):
        return "\n".join(f"{k}: {json.dumps(v)}" for k, v in data.items())
    return json.dumps(data)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        data = _load_input(getattr(args, "input", None))
        payload = COMMANDS[args.command](args, data)
    except UsageError as exc:
        print(f"winf {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if args.format == "text":
        body = _render_text(payload)
    else:
        body = json.dumps(payload.data, indent=2)
    if args.out:
        Path(args.out).write_text(body + "\n")
    else:
        print(body)
    return 0 if payload.ok else 1


if __name__ == "__main__":
    sys.exit(main())

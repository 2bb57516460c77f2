import json

import pytest

from winf.cli import main
from winf.dhat import DOp, virasoro
from winf.exact import Quasipoly
from winf.hweight import Spectrum

T1 = DOp.t(1).to_json()
TM1 = DOp.t(-1).to_json()


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_qchar_partitions(capsys):
    code, out, _ = run(capsys, "qchar", "--algebra", "gl", "--order", "5", '{"n": [], "h": 1}')
    assert code == 0
    assert json.loads(out)["coeffs"] == [1, 1, 2, 3, 5, 7]


def test_qchar_flags_only(capsys):
    code, out, _ = run(capsys, "qchar", "--algebra", "gl", "--n", "", "--h", "1", "--order", "5")
    assert code == 0
    assert json.loads(out)["coeffs"] == [1, 1, 2, 3, 5, 7]


def test_qchar_requires_order(capsys):
    code, _, err = run(capsys, "qchar", '{"algebra": "gl"}')
    assert code == 2
    assert "order" in err


def test_bracket_central(capsys):
    arg = json.dumps({"a": T1, "b": TM1})
    code, out, _ = run(capsys, "bracket", arg)
    assert code == 0
    assert DOp.from_json(json.loads(out)) == DOp.C(1)


def test_bad_field_names_the_field(capsys):
    code, _, err = run(capsys, "bracket", json.dumps({"a": "nonsense", "b": TM1}))
    assert code == 2
    assert "a:" in err


def test_output_is_deterministic(capsys):
    argv = ["walg-char", "--kind", "WD", "--l", "2", "--order", "6"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_out_file(tmp_path, capsys):
    path = tmp_path / "res.json"
    code, _, _ = run(capsys, "basis", "--kind", "W", "--n", "1", "--s", "0", "--k", "2", "--out", str(path))
    assert code == 0
    assert DOp.from_json(json.loads(path.read_text())) == virasoro(2)


def test_input_from_file(tmp_path, capsys):
    path = tmp_path / "in.json"
    path.write_text(json.dumps({"a": T1, "b": T1}))
    code, out, _ = run(capsys, "cocycle", str(path))
    assert code == 0
    assert json.loads(out)["agree"] is True


def test_spectrum_round_trip(capsys):
    """A cosh difference maps to one even exponent and back to the same F."""
    F = [["cosh", "1/2", ["-1"]], ["cosh", "1", ["1"]]]
    code, out, _ = run(capsys, "spectrum", "--sign", "-", json.dumps({"F": F, "c": 1}))
    assert code == 0
    sp = json.loads(out)
    assert Spectrum.from_json(sp) == Spectrum.from_lists("-", [(1, 1)])
    _, out, _ = run(capsys, "spectrum", json.dumps({"spectrum": sp}))
    assert Quasipoly.from_json(json.loads(out)["weight"]["F"]) == Quasipoly.from_json(F)


def test_spectrum_not_quasifinite(capsys):
    code, out, _ = run(capsys, "spectrum", "--sign", "-", json.dumps({"F": [["cosh", "1", ["1"]]], "c": 0}))
    assert code == 1 and json.loads(out)["quasifinite"] is False


def test_virasoro_exit_codes(capsys):
    code, out, _ = run(capsys, "virasoro", "--realization", "Fl-dplus", "--l", "1", "--cutoff", "3")
    assert code == 0 and json.loads(out)["ok"]
    code, _, err = run(capsys, "virasoro", "--realization", "Fl-dplus", "--l", "1", "--cutoff", "1")
    assert code == 2 and "cutoff" in err


def test_duality_exit_code(capsys):
    code, out, _ = run(capsys, "duality", "--pair", "O2l-dplus", "--l", "1", "--cutoff", "4")
    assert code == 0 and json.loads(out)["equal"]
    code, _, err = run(capsys, "duality", "--pair", "nope", "--l", "1", "--cutoff", "4")
    assert code == 2 and "pair" in err


def test_singular_exit_codes(capsys):
    vec = [[[["psi+", 1, "-1/2", 1], ["psi-", 1, "-1/2", 1]], "1"]]
    arg = json.dumps({"realization": "Fl-dplus", "l": 1, "vector": vec})
    assert run(capsys, "singular", arg)[0] == 0
    vec = [[[["psi+", 1, "-3/2", 1], ["psi-", 1, "-1/2", 1]], "1"]]
    arg = json.dumps({"realization": "Fl-dplus", "l": 1, "vector": vec})
    code, out, _ = run(capsys, "singular", arg)
    assert code == 1 and json.loads(out)["singular"] is False


def test_suite_single(capsys):
    code, out, _ = run(capsys, "suite", "virasoro-relation", "--format", "text")
    assert code == 0
    assert out.startswith("PASS  virasoro-relation")


def test_unknown_suite(capsys):
    assert run(capsys, "suite", "nope")[0] == 2


def test_missing_command():
    with pytest.raises(SystemExit):
        main([])

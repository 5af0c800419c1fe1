import json

import pytest

from omlogic.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_lattice_check_ok(capsys):
    code, out, _ = run(capsys, "lattice-check", "data/mo2.json")
    assert code == 0 and out.startswith("OK orthomodular, 6 elements")


def test_lattice_check_o6_names_witness(capsys):
    code, out, _ = run(capsys, "lattice-check", "data/o6.json")
    assert code == 1
    assert out.strip() == "INVALID OM: orthomodular law fails at (a, b)"
    code, out, _ = run(capsys, "lattice-check", "data/o6.json", "--format", "json")
    d = json.loads(out)
    assert d["axiom"] == "OM" and d["witness"] == ["a", "b"]


def test_lattice_check_malformed(tmp_path, capsys):
    p = tmp_path / "x.json"
    p.write_text("{")
    code, out, _ = run(capsys, "lattice-check", str(p))
    assert code == 1 and out.startswith("INVALID format")
    code, out, _ = run(capsys, "lattice-check")
    assert code == 1


def test_lattice_check_generated(capsys):
    code, out, _ = run(capsys, "lattice-check", "--gen", "prod:boolean:1,mo:2", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["n"] == 12 and not d["boolean"]


def test_impl_table(capsys):
    code, out, _ = run(capsys, "impl-table", "--gen", "mo:2", "--impl", "3", "--format", "json")
    d = json.loads(out)
    assert code == 0
    assert d["rows"]["a"] == ["a'", "1", "a'", "a'", "a'", "1"]
    code, out, _ = run(capsys, "impl-table", "--lattice", "data/mo2.json", "--impl", "table:data/mo2_sasaki_table.json")
    assert code == 0 and len(out.splitlines()) == 8


def test_eval_values(capsys):
    base = ["eval", "--gen", "mo:2", "--impl", "3", "--let", "u={{}: a}", "--let", "v={{}: b}"]
    assert run(capsys, *base[:1], "com(u, v)", *base[1:])[1].strip() == "0"
    assert run(capsys, "eval", "not (u = u)", *base[1:])[1].strip() == "0"
    assert run(capsys, "eval", "{} in u", *base[1:])[1].strip() == "a"
    code, out, _ = run(capsys, "eval", "exists x (x in u)", *base[1:], "--format", "json")
    d = json.loads(out)
    assert d["note"] == "fragment-relative" and not d["delta0"]


def test_eval_errors(capsys):
    code, _, err = run(capsys, "eval", "x in", "--gen", "mo:2")
    assert code == 2 and "error" in err
    code, _, err = run(capsys, "eval", "x in y", "--gen", "mo:2")
    assert code == 2 and "unbound" in err
    code, _, err = run(capsys, "eval", "x = x", "--gen", "mo:2", "--rank", "6")
    assert code == 2 and "budget" in err


def test_verify_exit_codes_and_determinism(capsys):
    argv = ["verify", "--gen", "mo:2", "--suite", "implication", "--suite", "demorgan-bounded", "--format", "json"]
    code, first, _ = run(capsys, *argv)
    assert code == 0
    d = json.loads(first)
    assert d["failed"] == 0 and {r["suite"] for r in d["reports"]} >= {"implication", "equality-gate"}
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_verify_unknown_suite(capsys):
    code, _, err = run(capsys, "verify", "--gen", "mo:2", "--suite", "bogus")
    assert code == 2 and "unknown suite" in err


def test_verify_uncertified_table_rejected(tmp_path, capsys):
    table = [["1"] * 6 for _ in range(6)]
    p = tmp_path / "t.json"
    p.write_text(json.dumps(table))
    code, out, err = run(capsys, "verify", "--gen", "mo:2", "--impl", f"table:{p}", "--suite", "equality")
    assert code == 2 and "not a generalized implication" in err


def test_matrix_witness(tmp_path, capsys):
    csv = tmp_path / "w.csv"
    code, out, _ = run(capsys, "matrix", "--theta", "1.5707963267948966", "--csv", str(csv))
    assert code == 0 and "witness succeeds" in out
    assert csv.read_text().startswith("name,row,col,re,im")
    code, _, err = run(capsys, "matrix", "--theta", "0")
    assert code == 2
    code, _, err = run(capsys, "matrix", "--j", "5", "--i", "0")
    assert code == 2


def test_matrix_relations(capsys):
    code, out, _ = run(capsys, "matrix", "--relations", "--dim", "3", "--samples", "20", "--seed", "1")
    assert code == 0 and out.startswith("[PASS] twisted relations")


def test_argparse_errors():
    with pytest.raises(SystemExit):
        main(["impl-table"])
    with pytest.raises(SystemExit):
        main(["nonsense"])

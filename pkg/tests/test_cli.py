import json
import subprocess
import sys

import numpy as np
import pytest

from braidcomp.cli import SWEEP_HEADER, dumps_json, main, read_sweep_csv
from braidcomp.linalg import save_matrix
from braidcomp.miqcqp import parse_model
from braidcomp.invariants import CNOT


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "braidcomp", "eval", "--program", "4444", "--target", "cnot"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert "d_cnot" in json.loads(proc.stdout)


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", "--program", "4444", "--target", "cnot")
    assert code == 0
    d = json.loads(out)
    assert d["program"] == "4444" and d["leaky"] is False and d["d_cnot"] > 0


def test_eval_program_file_and_orders(capsys, tmp_path):
    f = tmp_path / "prog.txt"
    f.write_text("0123\n4\n")
    code, fwd, _ = run(capsys, "eval", "--program", f"@{f}")
    code2, rev, _ = run(capsys, "eval", "--program", f"@{f}", "--order", "reversed")
    assert code == code2 == 0
    assert json.loads(fwd)["program"] == "01234"
    assert json.loads(rev)["order"] == "reversed"


def test_eval_matrix_target(capsys, tmp_path):
    t = tmp_path / "t.json"
    save_matrix(np.eye(4), t)
    code, out, _ = run(capsys, "eval", "--program", "", "--target", str(t))
    assert code == 0 and json.loads(out)["j"] == 0.0


def test_sweep_csv_stdout(capsys):
    code, out, _ = run(capsys, "sweep", "--gate", "4", "--lmax", "35", "--csv", "-")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == ",".join(SWEEP_HEADER)
    rows = read_sweep_csv(out)
    assert len(rows) == 35 and rows[-1]["d_pe"] < 1e-15


def test_sweep_csv_file_round_trip(capsys, tmp_path):
    path = tmp_path / "sweep.csv"
    assert run(capsys, "sweep", "--lmax", "10", "--csv", str(path))[0] == 0
    code, out, _ = run(capsys, "sweep", "--lmax", "10")
    as_json = json.loads(out)
    assert read_sweep_csv(path.read_text()) == as_json


def test_invariants(capsys, tmp_path):
    m = tmp_path / "cnot.json"
    save_matrix(np.asarray(CNOT), m)
    code, out, _ = run(capsys, "invariants", "--matrix", str(m))
    d = json.loads(out)
    assert code == 0
    assert abs(d["g3"] - 1) < 1e-12 and d["d_cnot"] < 1e-24


def test_alphabet(capsys, tmp_path):
    code, out, _ = run(capsys, "alphabet")
    assert code == 0 and json.loads(out)["ok"] is True
    out_path = tmp_path / "gates.json"
    assert run(capsys, "alphabet", "--dump", "--out", str(out_path))[0] == 0
    gates = json.loads(out_path.read_text())["gates"]
    assert list(gates) == ["b1^2", "b2", "J4", "b4", "CPHASE"]
    assert len(gates["b2"]) == 6


def test_alphabet_config(capsys, tmp_path):
    cfg = tmp_path / "alpha.json"
    cfg.write_text(json.dumps({"alpha": 2.2}))
    code, out, _ = run(capsys, "alphabet", "--config", str(cfg))
    assert code == 0 and json.loads(out)["params"]["alpha"] == 2.2


def test_compile(capsys, tmp_path):
    out_path = tmp_path / "res.json"
    code, _, _ = run(
        capsys, "compile", "--objective", "pe", "--max-depth", "35", "--mode", "beam", "--beam-width", "1", "--out", str(out_path)
    )
    d = json.loads(out_path.read_text())
    assert code == 0
    assert d["program"] == "4" * 35 and d["best_value"] < 1e-15


def test_compile_branch_and_bound(capsys):
    code, out, _ = run(capsys, "compile", "--max-depth", "2", "--mode", "branch-and-bound")
    assert code == 0 and json.loads(out)["proven_optimal"] is True


def test_export_model(capsys, tmp_path):
    path = tmp_path / "m.lp"
    code, out, _ = run(capsys, "export-model", "--objective", "cnot-class", "--depth", "2", "--linearize", "--out", str(path))
    assert code == 0
    summary = json.loads(out)
    assert len(parse_model(path).vars) == summary["vars"]


def test_verify_tables(capsys):
    code, out, _ = run(capsys, "verify-tables", "--table", "2")
    d = json.loads(out)
    assert code == 0
    assert d["n_rows"] == 20
    row = next(r for r in d["rows"] if r["depth"] == 35)
    assert row["pass"] and {"measured_forward", "measured_reversed"} <= set(row)


def test_floats_keep_17_digits():
    assert dumps_json({"x": 0.1, "y": 1.0, "z": float("nan")}) == '{\n  "x": 0.10000000000000001,\n  "y": 1.0,\n  "z": null\n}'


@pytest.mark.parametrize(
    "argv, code",
    [
        ([], 2),
        (["frobnicate"], 2),
        (["eval"], 2),
        (["eval", "--program", "44", "--bogus"], 2),
        (["sweep", "--lmax", "ten"], 2),
        (["compile", "--mode", "annealing"], 2),
        (["eval", "--program", "45"], 1),
        (["eval", "--program", "4x"], 1),
        (["eval", "--program", "@/nonexistent/prog.txt"], 1),
        (["invariants", "--matrix", "/nonexistent.json"], 1),
        (["sweep", "--gate", "9"], 1),
        (["sweep", "--lmax", "0"], 1),
        (["export-model", "--depth", "0", "--out", "/tmp/never.lp"], 1),
        (["compile", "--objective", "pe", "--mode", "branch-and-bound"], 1),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_non_unitary_matrix_exit_code(capsys, tmp_path):
    m = tmp_path / "half.json"
    save_matrix(0.5 * np.eye(4), m)
    code, _, err = run(capsys, "invariants", "--matrix", str(m))
    assert code == 1 and err.startswith("error:")


def test_help_lists_flags(capsys):
    for sub in ("alphabet", "eval", "invariants", "compile", "export-model", "sweep", "verify-tables"):
        assert run(capsys, sub, "--help")[0] == 0

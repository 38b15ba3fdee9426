"""Command-line entry point.

Exit codes: 0 success, 1 domain error (bad matrix, non-unitary input,
unreadable file, ...), 2 usage error. Results go to stdout as JSON unless
``--out``/``--csv`` names a file; ``-`` means stdout.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from .alphabet import AlphabetParams, build_alphabet, validate_alphabet
from .errors import BraidError
from .invariants import CNOT, d_cnot_from, d_pe_from, local_invariants
from .linalg import load_matrix, matrix_to_literal
from .miqcqp import build_frobenius_model, build_invariant_model, export_model
from .program import evaluate_report, parse_program, power_sweep
from .search import SearchConfig, search
from .tables import load_fixtures, verify_tables

SWEEP_HEADER = ("L", "d_pe", "d_cnot", "g1", "g2", "g3")
_OBJECTIVES = {"frobenius": "frobenius", "cnot-class": "cnot_class", "pe": "perfect_entangler"}


def dumps_json(obj, indent: int = 2) -> str:
    """JSON with every float written to 17 significant digits (NaN/Inf -> null)."""

    def enc(x, level: int) -> str:
        pad = " " * (indent * (level + 1))
        close = " " * (indent * level)
        if isinstance(x, (bool, np.bool_)):
            return "true" if x else "false"
        if isinstance(x, (int, np.integer)):
            return str(int(x))
        if isinstance(x, (float, np.floating)):
            x = float(x)
            if not math.isfinite(x):
                return "null"
            text = format(x, ".17g")
            return text if any(ch in text for ch in ".en") else text + ".0"
        if x is None:
            return "null"
        if isinstance(x, str):
            return json.dumps(x)
        if isinstance(x, dict):
            if not x:
                return "{}"
            items = [f"{pad}{json.dumps(str(k))}: {enc(v, level + 1)}" for k, v in x.items()]
            return "{\n" + ",\n".join(items) + "\n" + close + "}"
        if isinstance(x, (list, tuple)):
            if not x:
                return "[]"
            if all(not isinstance(v, (dict, list, tuple)) for v in x):
                return "[" + ", ".join(enc(v, level + 1) for v in x) + "]"
            return "[\n" + ",\n".join(pad + enc(v, level + 1) for v in x) + "\n" + close + "]"
        raise TypeError(f"cannot serialize {type(x).__name__}")

    return enc(obj, 0)


def _emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(out).write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")


def _alphabet(path: str | None):
    params = AlphabetParams.from_json(path) if path else AlphabetParams()
    return params, build_alphabet(params)


def _target(arg: str) -> np.ndarray:
    if arg.lower() == "cnot":
        return np.array(CNOT)
    return load_matrix(arg)


def _program_text(arg: str) -> str:
    if arg.startswith("@"):
        return Path(arg[1:]).read_text(encoding="utf-8")
    return arg


# -- subcommands -------------------------------------------------------------


def cmd_alphabet(args) -> int:
    params, alph = _alphabet(args.config)
    if args.dump:
        payload = {
            "params": params.to_dict(),
            "n": alph.n,
            "n_c": alph.n_c,
            "n_nc": alph.n_nc,
            "gates": {lbl: matrix_to_literal(g) for lbl, g in zip(alph.labels, alph.gates)},
        }
    else:
        rep = validate_alphabet(alph)
        payload = {
            "params": params.to_dict(),
            "labels": list(alph.labels),
            "unitarity_residuals": rep.unitarity_residuals,
            "block_residuals": rep.block_residuals,
            "det_moduli": rep.det_moduli,
            "ok": rep.ok,
        }
    _emit(dumps_json(payload), args.out)
    return 0


def cmd_eval(args) -> int:
    _, alph = _alphabet(args.alphabet)
    prog = parse_program(_program_text(args.program), alph.m)
    report = evaluate_report(prog, alph, _target(args.target), order=args.order)
    _emit(dumps_json(report.to_dict()), args.out)
    return 0


def cmd_invariants(args) -> int:
    u = load_matrix(args.matrix)
    g = local_invariants(u)
    payload = {"g1": g.g1, "g2": g.g2, "g3": g.g3, "d_cnot": d_cnot_from(g), "d_pe": d_pe_from(g)}
    _emit(dumps_json(payload), args.out)
    return 0


def cmd_compile(args) -> int:
    _, alph = _alphabet(args.alphabet)
    config = SearchConfig(
        objective=_OBJECTIVES[args.objective],
        max_depth=args.max_depth,
        mode=args.mode.replace("-", "_"),
        beam_width=args.beam_width,
        seed=args.seed,
        target=_target(args.target),
        prune_bound=args.prune_bound,
        prefix_window=args.prefix_window,
    )
    res = search(alph, config)
    payload = res.to_dict()
    payload["objective"] = args.objective
    payload["seed"] = args.seed
    _emit(dumps_json(payload), args.out)
    return 0


def cmd_export_model(args) -> int:
    _, alph = _alphabet(args.alphabet)
    objective = _OBJECTIVES[args.objective]
    if objective == "frobenius":
        model = build_frobenius_model(alph, _target(args.target), args.depth, args.linearize, args.pad_identity)
    else:
        model = build_invariant_model(alph, args.depth, objective, args.linearize, args.pad_identity)
    export_model(model, args.out)
    summary = dict(model.audit(), out=args.out, objective=args.objective, depth=args.depth)
    sys.stdout.write(dumps_json(summary) + "\n")
    return 0


def write_sweep_csv(rows, handle) -> None:
    w = csv.writer(handle, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for r in rows:
        w.writerow([r.L] + [format(v, ".17g") for v in r[1:]])


def read_sweep_csv(text: str) -> list[dict]:
    rdr = csv.DictReader(io.StringIO(text))
    return [{k: (int(v) if k == "L" else float(v)) for k, v in row.items()} for row in rdr]


def cmd_sweep(args) -> int:
    _, alph = _alphabet(args.alphabet)
    if not 0 <= args.gate < alph.m:
        raise BraidError(f"gate index {args.gate} out of range")
    rows = power_sweep(args.gate, alph, args.lmax)
    if args.csv is None:
        _emit(dumps_json([r._asdict() for r in rows]), None)
        return 0
    buf = io.StringIO()
    write_sweep_csv(rows, buf)
    _emit(buf.getvalue(), args.csv)
    return 0


def cmd_verify_tables(args) -> int:
    _, alph = _alphabet(args.alphabet)
    rows = load_fixtures(args.fixtures)
    if args.table:
        rows = [r for r in rows if r.table in args.table]
    summary = verify_tables(rows, alph)
    _emit(dumps_json(summary.to_dict()), args.out)
    return 0


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="braidcomp", description="Braid-gate compilation toolkit for NON-SEMI anyons.")
    sub = p.add_subparsers(dest="command", required=True)

    def with_alphabet(sp):
        sp.add_argument("--alphabet", metavar="CONFIG.json", help="alphabet parameter file (default alpha=2.4, k=1)")

    sp = sub.add_parser("alphabet", help="build and validate the gate alphabet")
    sp.add_argument("--config", metavar="CONFIG.json", help="alphabet parameter file")
    sp.add_argument("--dump", action="store_true", help="emit all gate matrices as [re, im] JSON")
    sp.add_argument("--out", help="output file (default stdout)")
    sp.set_defaults(func=cmd_alphabet)

    sp = sub.add_parser("eval", help="evaluate a program and report all metrics")
    sp.add_argument("--program", required=True, help="digit string, or @FILE to read it from a file")
    sp.add_argument("--target", default="cnot", help="'cnot' or a matrix JSON file")
    sp.add_argument("--order", choices=("forward", "reversed"), default="forward", help="digit application order")
    sp.add_argument("--out", help="output file (default stdout)")
    with_alphabet(sp)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("invariants", help="local invariants and distances of a 4x4 matrix")
    sp.add_argument("--matrix", required=True, help="matrix JSON file ([[[re, im], ...], ...])")
    sp.add_argument("--out", help="output file (default stdout)")
    sp.set_defaults(func=cmd_invariants)

    sp = sub.add_parser("compile", help="native search for a program")
    sp.add_argument("--objective", choices=tuple(_OBJECTIVES), default="frobenius")
    sp.add_argument("--target", default="cnot", help="'cnot' or a matrix JSON file (frobenius only)")
    sp.add_argument("--max-depth", type=int, default=4)
    sp.add_argument("--mode", choices=("exhaustive", "branch-and-bound", "beam"), default="exhaustive")
    sp.add_argument("--beam-width", type=int, default=16)
    sp.add_argument("--prune-bound", type=float, default=None, help="known achievable value (branch-and-bound)")
    sp.add_argument("--prefix-window", type=int, default=0, help="canonical-prefix window length; 0 disables")
    sp.add_argument("--seed", type=int, default=0, help="recorded in the output; all modes are deterministic")
    sp.add_argument("--out", help="output file (default stdout)")
    with_alphabet(sp)
    sp.set_defaults(func=cmd_compile)

    sp = sub.add_parser("export-model", help="write the compilation model in LP format")
    sp.add_argument("--objective", choices=tuple(_OBJECTIVES), default="frobenius")
    sp.add_argument("--target", default="cnot", help="'cnot' or a matrix JSON file (frobenius only)")
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--linearize", action="store_true", help="McCormick-linearize the gate-selection products")
    sp.add_argument("--pad-identity", action="store_true", help="add I_n to the alphabet (search depth <= d)")
    sp.add_argument("--out", required=True, help="LP file to write")
    with_alphabet(sp)
    sp.set_defaults(func=cmd_export_model)

    sp = sub.add_parser("sweep", help="metrics of successive powers of one gate")
    sp.add_argument("--gate", type=int, default=4)
    sp.add_argument("--lmax", type=int, default=50)
    sp.add_argument("--csv", help="CSV output path, '-' for stdout (default: JSON to stdout)")
    with_alphabet(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify-tables", help="re-evaluate the published result tables")
    sp.add_argument("--fixtures", help="fixture JSON (default: bundled tables)")
    sp.add_argument("--table", type=int, action="append", help="restrict to table number (repeatable)")
    sp.add_argument("--out", help="output file (default stdout)")
    with_alphabet(sp)
    sp.set_defaults(func=cmd_verify_tables)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (BraidError, OSError, ValueError, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())

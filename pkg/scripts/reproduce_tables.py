"""Re-evaluate every transcribed table row under both application orders.

Writes a CSV (one line per row) and prints per-table pass counts.

    python3 scripts/reproduce_tables.py --out results/tables.csv
"""

import argparse
import csv
import sys
from collections import Counter
from contextlib import nullcontext
from pathlib import Path

from braidcomp.alphabet import build_alphabet
from braidcomp.tables import load_fixtures, sig_fig_tolerance, verify_tables


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="-", help="CSV path, '-' for stdout")
    ap.add_argument("--figures", type=int, default=4, help="significant figures required")
    args = ap.parse_args(argv)

    summary = verify_tables(load_fixtures(), build_alphabet(), figures=args.figures)
    fields = ["table", "depth", "metric", "printed", "forward", "reversed", "tolerance", "pass", "mixed"]
    sink = nullcontext(sys.stdout) if args.out == "-" else open(Path(args.out), "w", newline="", encoding="utf-8")
    with sink as handle:
        w = csv.writer(handle, lineterminator="\n")
        w.writerow(fields)
        for o in summary.outcomes:
            r = o.row
            w.writerow(
                [
                    r.table,
                    r.depth,
                    r.metric,
                    r.printed,
                    format(o.measured["forward"], ".6e"),
                    format(o.measured["reversed"], ".6e"),
                    format(sig_fig_tolerance(r.value, args.figures), ".1e"),
                    int(o.passed),
                    int(r.order_sensitive),
                ]
            )

    total, passed = Counter(), Counter()
    for o in summary.outcomes:
        key = (o.row.table, "mixed" if o.row.order_sensitive else "all-4")
        total[key] += 1
        passed[key] += o.passed
    for key in sorted(total):
        print(f"table {key[0]} {key[1]:>5}: {passed[key]:3d}/{total[key]:3d} rows match", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Desk-scale compilation runs: optimum per depth for each objective.

    python3 scripts/native_search.py --max-depth 4
    python3 scripts/native_search.py --objective perfect_entangler --mode beam --beam-width 64 --max-depth 40

Exhaustive and branch-and-bound runs are proven optimal; beam runs are not.
"""

import argparse
import json
import sys
import time

from braidcomp.alphabet import build_alphabet
from braidcomp.search import SearchConfig, search

OBJECTIVES = ("frobenius", "cnot_class", "perfect_entangler")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--objective", choices=OBJECTIVES, action="append")
    ap.add_argument("--mode", choices=("exhaustive", "branch_and_bound", "beam"), default="exhaustive")
    ap.add_argument("--max-depth", type=int, default=4)
    ap.add_argument("--beam-width", type=int, default=16)
    ap.add_argument("--prefix-window", type=int, default=0)
    args = ap.parse_args(argv)

    alph = build_alphabet()
    for objective in args.objective or OBJECTIVES:
        if args.mode == "branch_and_bound" and objective != "frobenius":
            continue
        depths = [args.max_depth] if args.mode == "beam" else range(1, args.max_depth + 1)
        for depth in depths:
            cfg = SearchConfig(
                objective=objective,
                max_depth=depth,
                mode=args.mode,
                beam_width=args.beam_width,
                prefix_window=args.prefix_window,
            )
            t0 = time.perf_counter()
            res = search(alph, cfg)
            row = {
                "objective": objective,
                "max_depth": depth,
                "program": str(res.best_program),
                "value": res.best_value,
                "nodes": res.nodes_explored,
                "proven_optimal": res.proven_optimal,
                "seconds": round(time.perf_counter() - t0, 3),
            }
            print(json.dumps(row))
    return 0


if __name__ == "__main__":
    sys.exit(main())

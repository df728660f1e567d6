"""Classify every small bicirculant and write the sweep report as JSON.

    python3 scripts/run_sweep.py --m-max 10 --d-max 5 --out sweep.json
"""

import argparse
import json
import sys

from bicyc.dispatcher import sweep
from bicyc.oracle import SearchBudget


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m-max", type=int, default=10)
    ap.add_argument("--d-max", type=int, default=5)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--cross-check-m", type=int, default=12)
    ap.add_argument("--budget-nodes", type=int, default=2_000_000)
    ap.add_argument("--out")
    args = ap.parse_args()
    rep = sweep(args.m_max, args.d_max, SearchBudget(max_nodes=args.budget_nodes), jobs=args.jobs,
                cross_check_m=args.cross_check_m)
    text = json.dumps(rep.to_json(include_timing=True), indent=1, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    print(f"{rep.universe_size} parameter sets, {len(rep.exceptions)} non-hamiltonian, "
          f"{len(rep.unknown)} unknown, {rep.seconds:.1f}s", file=sys.stderr)
    return 0 if not rep.unknown and not rep.agreement_failures else 1


if __name__ == "__main__":
    sys.exit(main())

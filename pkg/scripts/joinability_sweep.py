"""Run the joinability harness over a grid of atom counts and size bounds."""

from __future__ import annotations

import argparse
import time

from idpaths.errors import BudgetExceeded
from idpaths.harness import DEFAULT_BUDGET, joinability_harness


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--atoms", type=int, nargs="+", default=[1, 2, 3])
    parser.add_argument("--max-nodes", type=int, nargs="+", default=[3, 4, 5, 6, 7])
    parser.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    parser.add_argument("--show", type=int, default=3, help="divergences to print per cell")
    args = parser.parse_args()

    print(f"{'atoms':>5} {'nodes':>5} {'paths':>8} {'states':>8} {'divergent':>9} {'seconds':>8}")
    for atoms in args.atoms:
        for nodes in args.max_nodes:
            started = time.perf_counter()
            try:
                report = joinability_harness(atoms, nodes, args.budget)
            except BudgetExceeded as exc:
                print(f"{atoms:5d} {nodes:5d}  budget exceeded ({exc})")
                continue
            seconds = time.perf_counter() - started
            print(f"{atoms:5d} {nodes:5d} {report.subjects:8d} {report.states:8d} {len(report.divergences):9d} {seconds:8.2f}")
            for d in report.divergences[: args.show]:
                print(f"        {d.subject}")
                print(f"          [{' '.join(d.left.rules())}] -> {d.left.final}")
                print(f"          [{' '.join(d.right.rules())}] -> {d.right.final}")


if __name__ == "__main__":
    main()

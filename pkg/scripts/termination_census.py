"""Apply every rule at every redex of every small path and confirm the measure drops each time."""

from __future__ import annotations

import argparse
import time
from collections import Counter

from idpaths.harness import enumerate_paths
from idpaths.rewriting import apply_rule, is_normal, measure, normalize_path, redexes


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--atoms", type=int, default=2)
    parser.add_argument("--max-nodes", type=int, default=8)
    parser.add_argument("--budget", type=int, default=10**7)
    args = parser.parse_args()

    started = time.perf_counter()
    subjects = enumerate_paths(args.atoms, args.max_nodes, args.budget)
    by_rule: Counter[str] = Counter()
    violations = []
    longest = 0
    for p in subjects:
        before = measure(p)
        for pos, rule in redexes(p):
            by_rule[str(rule)] += 1
            if not measure(apply_rule(p, pos, rule)) < before:
                violations.append((p, pos, rule))
        nf, trace = normalize_path(p)
        longest = max(longest, len(trace.steps))
        if not is_normal(nf):
            violations.append((p, None, "normal form has a redex"))

    print(f"{len(subjects)} paths with at most {args.max_nodes} nodes over {args.atoms} atoms")
    for rule, n in sorted(by_rule.items()):
        print(f"  {rule:4s} {n:7d} applications")
    print(f"longest normalization: {longest} steps")
    print(f"violations: {len(violations)}")
    for p, pos, rule in violations[:10]:
        print(f"  {rule} at {pos} in {p}")
    print(f"{time.perf_counter() - started:.2f} s")


if __name__ == "__main__":
    main()

"""Reproduce the worked beta-eta example: the path from M to z v and its ground form."""

from __future__ import annotations

import argparse
import time

from idpaths.paths import find_betaeta_path
from idpaths.syntax import parse_term

M = r"((\x.((\y.(y x)) (\w.(z w)))) v)"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--source", default=M)
    parser.add_argument("--target", default="(z v)")
    parser.add_argument("--fuel", type=int, default=1000)
    args = parser.parse_args()

    started = time.perf_counter()
    p = find_betaeta_path(parse_term(args.source), parse_term(args.target), args.fuel)
    seconds = time.perf_counter() - started
    if p is None:
        print("not joinable within fuel")
        return
    print(p)
    print(p.ground())
    print(f"size {p.size}, found in {seconds * 1000:.2f} ms")


if __name__ == "__main__":
    main()

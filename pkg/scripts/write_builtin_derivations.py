"""Write refl, symm and trans as derivation files that `idpaths check` accepts."""

from __future__ import annotations

import argparse
from pathlib import Path

from idpaths.kernel import builtin_constructions, check
from idpaths.syntax import format_derivation, parse_derivation


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "derivations")
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, d in builtin_constructions().items():
        text = format_derivation(d) + "\n"
        assert check(parse_derivation(text)) == d.conclusion
        target = args.out / f"{name}.deriv"
        target.write_text(text, encoding="utf-8")
        print(f"wrote {target}")


if __name__ == "__main__":
    main()

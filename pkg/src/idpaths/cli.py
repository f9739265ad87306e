"""Command-line front end.

Exit status: 0 on success, 1 on a domain negative (not joinable, law failed,
derivation rejected), 2 on a parse or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Callable, TextIO

from . import groupoid, harness, kernel, paths, syntax, terms
from .errors import BudgetExceeded, FuelExhausted, KernelError, LawFailed, MalformedTower, ParseError
from .rewriting import normalize_path

OK, DOMAIN_FAILURE, USAGE_ERROR = 0, 1, 2


class Output:
    """Collects records and renders them as text, JSON lines or one JSON document."""

    def __init__(self, fmt: str, stream: TextIO) -> None:
        self.fmt = fmt
        self.stream = stream
        self.records: list[dict] = []

    def emit(self, record: dict, text: str | None = None) -> None:
        if self.fmt == "records":
            print(json.dumps(record, ensure_ascii=False), file=self.stream)
        elif self.fmt == "json":
            self.records.append(record)
        elif text is not None:
            print(text, file=self.stream)

    def close(self) -> None:
        if self.fmt == "json":
            json.dump(self.records, self.stream, ensure_ascii=False, indent=2)
            print(file=self.stream)


# ---------------------------------------------------------------- subcommands


def cmd_parse(args, out: Output) -> int:
    parse = {
        "term": syntax.parse_term,
        "path": syntax.parse_path,
        "proof": syntax.parse_proof_term,
        "type": syntax.parse_type,
        "judgment": syntax.parse_judgment,
    }[args.kind]
    obj = parse(args.expr)
    if args.kind == "term":
        pretty = terms.pretty(obj)
    elif args.kind == "path":
        pretty = obj.ground()
    elif args.kind == "proof":
        pretty = kernel.pretty(obj)
    elif args.kind == "type":
        pretty = kernel.pretty_type(obj)
    else:
        pretty = kernel.pretty_judgment(obj)
    out.emit({"record": "parsed", "kind": args.kind, "canonical": str(obj), "pretty": pretty}, f"{obj}\n{pretty}")
    return OK


def _leaves(p: paths.Path) -> list[paths.Path]:
    if not p.children:
        return [p]
    return [leaf for kid in p.children for leaf in _leaves(kid)]


def cmd_path(args, out: Output) -> int:
    m, n = syntax.parse_term(args.source), syntax.parse_term(args.target)
    started = time.perf_counter()
    try:
        p = paths.find_betaeta_path(m, n, args.fuel)
    except FuelExhausted as exc:
        out.emit({"record": "path", "joinable": None, "reason": str(exc)}, f"not joinable within fuel ({exc})")
        return DOMAIN_FAILURE
    if p is None:
        out.emit({"record": "path", "joinable": False}, "not joinable within fuel")
        return DOMAIN_FAILURE
    steps = [leaf for leaf in _leaves(p) if not isinstance(leaf, paths.Rho)]
    record = {
        "record": "path",
        "joinable": True,
        "path": str(p),
        "ground": p.ground(),
        "source": str(p.source),
        "target": str(p.target),
        "steps": [type(s).__name__ for s in steps],
        "tau_nodes": _count(p, paths.Tau),
        "seconds": round(time.perf_counter() - started, 6),
    }
    kinds = ", ".join(_step_symbol(s) for s in steps) or "none"
    out.emit(record, f"{p}\n{p.ground()}\nbasic steps: {kinds}; tau nodes: {record['tau_nodes']}")
    return OK


def _step_symbol(p: paths.Path) -> str:
    return {"EtaStep": "eta", "BetaStep": "beta", "AlphaStep": "alpha"}.get(type(p).__name__, type(p).__name__)


def _count(p: paths.Path, cls: type) -> int:
    return (1 if isinstance(p, cls) else 0) + sum(_count(k, cls) for k in p.children)


def cmd_normalize_path(args, out: Output) -> int:
    p = syntax.parse_path(args.path)
    nf, trace = normalize_path(p)
    if out.fmt == "text":
        print(nf, file=out.stream)
        print(f"trace ({len(trace.steps)} steps)", file=out.stream)
        for i, step in enumerate(trace.steps):
            print(f"  {i}: {step.rule} at {list(step.position)}: {step.before} => {step.after}", file=out.stream)
        return OK
    for record in trace.to_records():
        out.emit(record)
    return OK


def cmd_check(args, out: Output) -> int:
    if args.builtin:
        derivation = kernel.builtin_constructions()[args.builtin]
        name = args.builtin
    else:
        if args.file is None:
            raise UsageError("check needs a derivation file or --builtin")
        try:
            with open(args.file, encoding="utf-8") as handle:
                text = handle.read()
        except OSError as exc:
            raise UsageError(f"cannot read {args.file}: {exc.strerror}") from exc
        derivation = syntax.parse_derivation(text)
        name = args.file
    context = {}
    for decl in args.declare:
        var, _, ty = decl.partition(":")
        if not ty:
            raise UsageError(f"--declare expects name:type, got {decl!r}")
        context[var.strip()] = syntax.parse_type(ty)
    try:
        judgment = kernel.check(derivation, context)
    except KernelError as exc:
        out.emit(
            {"record": "check", "source": name, "valid": False, "error": type(exc).__name__, "message": str(exc)},
            f"rejected: {type(exc).__name__}: {exc}",
        )
        return DOMAIN_FAILURE
    out.emit(
        {"record": "check", "source": name, "valid": True, "conclusion": str(judgment), "pretty": kernel.pretty_judgment(judgment)},
        f"{judgment}\n{kernel.pretty_judgment(judgment)}",
    )
    return OK


def cmd_groupoid(args, out: Output) -> int:
    status = OK
    for law in groupoid.LAWS:
        try:
            witness = groupoid.verify_law(law)
        except (LawFailed, KernelError) as exc:
            out.emit({"record": "law", "law": law.name, "verified": False, "error": str(exc)}, f"{law.name}: FAILED {exc}")
            status = DOMAIN_FAILURE
            continue
        out.emit(
            {"record": "law", "verified": True, **witness.to_record()},
            f"{law.name}: {witness.lhs.ground()} ~> {witness.normal_form.ground()}  [{' '.join(witness.rules)}]\n"
            f"  witness  {witness.path.ground()}\n  inhabits {witness.rendered()}",
        )
    return status


def cmd_globular(args, out: Output) -> int:
    config = groupoid.TowerConfig(count=args.count, max_depth=args.max_depth, seed=args.seed)
    started = time.perf_counter()
    failures = 0
    for i, tower in enumerate(groupoid.random_towers(config)):
        try:
            ok = groupoid.globular_check(tower)
        except MalformedTower:
            ok = False
        if not ok:
            failures += 1
            out.emit({"record": "tower", "index": i, "ok": False}, f"tower {i} fails the globular identities")
    record = {
        "record": "globular",
        "towers": config.count,
        "seed": config.seed,
        "failures": failures,
        "seconds": round(time.perf_counter() - started, 3),
    }
    out.emit(record, f"{config.count} towers (seed {config.seed}): {failures} failures")
    return OK if failures == 0 else DOMAIN_FAILURE


def cmd_joinability(args, out: Output) -> int:
    config = harness.HarnessConfig(args.atoms, args.max_nodes, args.budget)
    report = harness.joinability_harness(config.atom_count, config.max_nodes, config.budget)
    record = report.to_record()
    if out.fmt != "text":
        out.emit({"record": "joinability", **record})
        return OK
    print(f"{report.subjects} paths, {report.states} states explored", file=out.stream)
    if report.joinable:
        print("every path has a unique normal form", file=out.stream)
    for d in report.divergences:
        print(f"divergence at {d.subject}", file=out.stream)
        for side in (d.left, d.right):
            print(f"  [{' '.join(side.rules())}] -> {side.final}", file=out.stream)
    print(f"witness traces chain: {report.witnesses_chain()}", file=out.stream)
    return OK


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- wiring


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "records", "json"), default="text")
    common.add_argument("--fuel", type=_positive, default=1000, help="step limit for term normalization")

    parser = argparse.ArgumentParser(prog="idpaths", description="Computational paths and the identity type.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="parse and reprint an expression")
    p.add_argument("expr")
    p.add_argument("--kind", choices=("term", "path", "proof", "type", "judgment"), default="term")
    p.set_defaults(run=cmd_parse)

    p = sub.add_parser("path", parents=[common], help="find a beta-eta path between two terms")
    p.add_argument("source")
    p.add_argument("target")
    p.set_defaults(run=cmd_path)

    p = sub.add_parser("normalize-path", parents=[common], help="normalize a path and print its trace")
    p.add_argument("path")
    p.set_defaults(run=cmd_normalize_path)

    p = sub.add_parser("check", parents=[common], help="check a derivation file")
    p.add_argument("file", nargs="?")
    p.add_argument("--builtin", choices=("refl", "symm", "trans"))
    p.add_argument("--declare", action="append", default=[], metavar="NAME:TYPE", help="declare a free variable")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("groupoid", parents=[common], help="verify the six groupoid laws")
    p.set_defaults(run=cmd_groupoid)

    p = sub.add_parser("globular", parents=[common], help="check globular identities on random towers")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=_positive, default=1000)
    p.add_argument("--max-depth", type=int, default=4)
    p.set_defaults(run=cmd_globular)

    p = sub.add_parser("joinability", parents=[common], help="explore every reduction of small paths")
    p.add_argument("--atoms", type=int, default=2)
    p.add_argument("--max-nodes", type=int, default=6)
    p.add_argument("--budget", type=_positive, default=harness.DEFAULT_BUDGET)
    p.set_defaults(run=cmd_joinability)
    return parser


def main(argv: list[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code else OK
    out = Output(args.format, stdout)
    run: Callable = args.run
    try:
        status = run(args, out)
    except (ParseError, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
        return USAGE_ERROR
    except (BudgetExceeded, FuelExhausted, KernelError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return DOMAIN_FAILURE
    out.close()
    return status


if __name__ == "__main__":
    sys.exit(main())

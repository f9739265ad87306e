"""Exhaustive small-instance exploration of the rewrite rules.

Paths are enumerated over a chain of atoms ``p: a -> b``, ``q: b -> c``,
``r: c -> d`` built from rho, sigma and tau only. For each subject every
reduction sequence is followed; a subject whose sequences end in more than
one normal form is reported with a trace to two of them.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from .errors import BudgetExceeded
from .paths import Atom, Path, Rho, Sigma, Tau, endpoint_key
from .rewriting import RewriteStep, Trace, apply_rule, redexes
from .terms import Var

VERTEX_NAMES = "abcd"
ATOM_NAMES = "pqr"
DEFAULT_BUDGET = 200_000


@dataclass(frozen=True)
class HarnessConfig:
    atom_count: int = 2
    max_nodes: int = 6
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if not 1 <= self.atom_count <= 3:
            raise ValueError("atom_count must be between 1 and 3")
        if not 1 <= self.max_nodes <= 9:
            raise ValueError("max_nodes must be between 1 and 9")


def chain_atoms(atom_count: int) -> list[Atom]:
    vertices = [Var(v) for v in VERTEX_NAMES[: atom_count + 1]]
    return [Atom(ATOM_NAMES[i], vertices[i], vertices[i + 1]) for i in range(atom_count)]


def enumerate_paths(atom_count: int, max_nodes: int, budget: int = DEFAULT_BUDGET) -> list[Path]:
    """Every well-formed rho/sigma/tau path over the atom chain with at most ``max_nodes`` nodes."""
    atoms = chain_atoms(atom_count)
    vertices = [atoms[0].source] + [a.target for a in atoms]
    by_size: dict[int, list[Path]] = {1: [*atoms, *(Rho(v) for v in vertices)]}
    by_source: dict[int, dict[tuple, list[Path]]] = {}
    total = len(by_size[1])

    def index(n: int) -> None:
        groups = defaultdict(list)
        for p in by_size[n]:
            groups[endpoint_key(p.source)].append(p)
        by_source[n] = groups

    index(1)
    for n in range(2, max_nodes + 1):
        layer = [Sigma(p) for p in by_size[n - 1]]
        for i in range(1, n - 1):
            for left in by_size[i]:
                for right in by_source[n - 1 - i].get(endpoint_key(left.target), ()):
                    layer.append(Tau(left, right))
                    if total + len(layer) > budget:
                        raise BudgetExceeded(f"more than {budget} paths with at most {max_nodes} nodes")
        total += len(layer)
        if total > budget:
            raise BudgetExceeded(f"more than {budget} paths with at most {max_nodes} nodes")
        by_size[n] = layer
        index(n)
    return [p for n in range(1, max_nodes + 1) for p in by_size[n]]


class Explorer:
    """Memoized map from a path to all its normal forms, each with a first step towards it."""

    def __init__(self) -> None:
        self.memo: dict[Path, dict[Path, RewriteStep | None]] = {}

    def normal_forms(self, p: Path) -> dict[Path, RewriteStep | None]:
        known = self.memo.get(p)
        if known is not None:
            return known
        reached: dict[Path, RewriteStep | None] = {}
        moves = redexes(p)
        if not moves:
            reached[p] = None
        for pos, rule in moves:
            q = apply_rule(p, pos, rule)
            first = RewriteStep(rule, pos, p, q)
            for nf in self.normal_forms(q):
                reached.setdefault(nf, first)
        self.memo[p] = reached
        return reached

    def trace_to(self, p: Path, nf: Path) -> Trace:
        steps = []
        current = p
        while (s := self.normal_forms(current)[nf]) is not None:
            steps.append(s)
            current = s.after
        return Trace(p, tuple(steps))


@dataclass(frozen=True)
class Divergence:
    subject: Path
    left: Trace
    right: Trace

    def to_record(self) -> dict:
        return {
            "subject": str(self.subject),
            "normal_forms": [str(self.left.final), str(self.right.final)],
            "left_trace": [s.to_record() for s in self.left.steps],
            "right_trace": [s.to_record() for s in self.right.steps],
        }


@dataclass
class JoinabilityReport:
    config: HarnessConfig
    subjects: int = 0
    states: int = 0
    divergences: list[Divergence] = field(default_factory=list)

    @property
    def joinable(self) -> bool:
        return not self.divergences

    def witnesses_chain(self) -> bool:
        """Every witness trace is a valid rewrite sequence ending in a normal form."""
        for d in self.divergences:
            for trace in (d.left, d.right):
                if trace.initial != d.subject or not trace.is_chained() or redexes(trace.final):
                    return False
            if d.left.final == d.right.final:
                return False
        return True

    def to_record(self) -> dict:
        record = {
            "atoms": self.config.atom_count,
            "max_nodes": self.config.max_nodes,
            "subjects": self.subjects,
            "states": self.states,
        }
        if self.joinable:
            record["joinable"] = "all"
        else:
            record["joinable"] = "no"
            record["divergent"] = len(self.divergences)
            record["witnesses"] = [d.to_record() for d in self.divergences]
        return record


def joinability_harness(atom_count: int = 2, max_nodes: int = 6, budget: int = DEFAULT_BUDGET) -> JoinabilityReport:
    config = HarnessConfig(atom_count, max_nodes, budget)
    subjects = enumerate_paths(atom_count, max_nodes, budget)
    report = JoinabilityReport(config, subjects=len(subjects))
    explorer = Explorer()
    for p in subjects:
        forms = explorer.normal_forms(p)
        if len(explorer.memo) > budget:
            raise BudgetExceeded(f"more than {budget} reachable paths explored")
        if len(forms) > 1:
            first, second = list(forms)[:2]
            report.divergences.append(Divergence(p, explorer.trace_to(p, first), explorer.trace_to(p, second)))
    report.states = len(explorer.memo)
    return report


def explore(p: Path) -> JoinabilityReport:
    """Run the all-sequences exploration on a single path."""
    explorer = Explorer()
    forms = explorer.normal_forms(p)
    report = JoinabilityReport(HarnessConfig(1, 1), subjects=1, states=len(explorer.memo))
    if len(forms) > 1:
        first, second = list(forms)[:2]
        report.divergences.append(Divergence(p, explorer.trace_to(p, first), explorer.trace_to(p, second)))
    return report

"""The seven redundancy-removing rules on paths, normalization and traces.

Rules, in matching priority::

    sr   sigma(rho)            -> rho
    ss   sigma(sigma(r))       -> r
    tr   tau(r, sigma(r))      -> rho at source(r)
    tsr  tau(sigma(r), r)      -> rho at target(r)
    trr  tau(r, rho)           -> r
    tlr  tau(rho, r)           -> r
    tt   tau(tau(t, r), s)     -> tau(t, tau(r, s))

The repeated ``r`` in tr/tsr must be the same tree, compared structurally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator

from .errors import RuleNotApplicable
from .paths import (
    Path,
    Rho,
    RuleStep,
    Sigma,
    Tau,
    compose,
    replace_subpath,
    subpath_at,
)

Position = tuple[int, ...]


class RuleId(str, Enum):
    SR = "sr"
    SS = "ss"
    TR = "tr"
    TSR = "tsr"
    TRR = "trr"
    TLR = "tlr"
    TT = "tt"

    def __str__(self) -> str:
        return self.value


PRIORITY = tuple(RuleId)


def rule_matches(rule: RuleId | str, node: Path) -> bool:
    rule = RuleId(rule)
    if rule is RuleId.SR:
        return isinstance(node, Sigma) and isinstance(node.inner, Rho)
    if rule is RuleId.SS:
        return isinstance(node, Sigma) and isinstance(node.inner, Sigma)
    if not isinstance(node, Tau):
        return False
    left, right = node.left, node.right
    if rule is RuleId.TR:
        return isinstance(right, Sigma) and right.inner == left
    if rule is RuleId.TSR:
        return isinstance(left, Sigma) and left.inner == right
    if rule is RuleId.TRR:
        return isinstance(right, Rho)
    if rule is RuleId.TLR:
        return isinstance(left, Rho)
    return isinstance(left, Tau)


def contract(rule: RuleId | str, node: Path) -> Path:
    """Rewrite ``node`` at its root by ``rule``."""
    rule = RuleId(rule)
    if not rule_matches(rule, node):
        raise RuleNotApplicable(f"{rule} does not match {node}")
    if rule is RuleId.SR:
        return node.inner
    if rule is RuleId.SS:
        return node.inner.inner
    if rule is RuleId.TR:
        return Rho(node.left.source)
    if rule is RuleId.TSR:
        return Rho(node.right.target)
    if rule is RuleId.TRR:
        return node.left
    if rule is RuleId.TLR:
        return node.right
    return Tau(node.left.left, Tau(node.left.right, node.right))


def matching_rules(node: Path) -> list[RuleId]:
    return [rule for rule in PRIORITY if rule_matches(rule, node)]


def match_rule(p: Path, at: Position = ()) -> RuleId | None:
    for rule in PRIORITY:
        if rule_matches(rule, subpath_at(p, at)):
            return rule
    return None


def apply_rule(p: Path, at: Position, rule: RuleId | str) -> Path:
    """Rewrite the node at ``at``.

    Any rule whose schema matches is accepted, not only the highest-priority
    one, so that every reduction sequence can be explored.
    """
    node = subpath_at(p, at)
    return replace_subpath(p, at, contract(rule, node))


def measure(p: Path) -> tuple[int, int]:
    """(node count, sum over tau nodes of the left child's node count)."""
    return p.size, _left_weight(p)


def _left_weight(p: Path) -> int:
    total = p.left.size if isinstance(p, Tau) else 0
    return total + sum(_left_weight(kid) for kid in p.children)


@dataclass(frozen=True)
class RewriteStep:
    rule: RuleId
    position: Position
    before: Path
    after: Path

    def as_path(self) -> RuleStep:
        return RuleStep(self.rule.value, self.before, self.after)

    def to_record(self) -> dict:
        return {
            "rule": self.rule.value,
            "position": list(self.position),
            "before": str(self.before),
            "after": str(self.after),
        }


@dataclass(frozen=True)
class Trace:
    initial: Path
    steps: tuple[RewriteStep, ...] = field(default_factory=tuple)

    @property
    def final(self) -> Path:
        return self.steps[-1].after if self.steps else self.initial

    def as_path(self) -> Path:
        """The trace read as a path one level up."""
        if not self.steps:
            return Rho(self.initial)
        return compose([step.as_path() for step in self.steps])

    def rules(self) -> list[str]:
        return [step.rule.value for step in self.steps]

    def is_chained(self) -> bool:
        current = self.initial
        for step in self.steps:
            if step.before != current:
                return False
            if apply_rule(step.before, step.position, step.rule) != step.after:
                return False
            current = step.after
        return True

    def to_records(self) -> list[dict]:
        return (
            [{"record": "initial", "path": str(self.initial)}]
            + [{"record": "step", "index": i, **s.to_record()} for i, s in enumerate(self.steps)]
            + [{"record": "final", "path": str(self.final)}]
        )


def _postorder(p: Path, prefix: Position = ()) -> Iterator[tuple[Position, Path]]:
    for i, kid in enumerate(p.children):
        yield from _postorder(kid, prefix + (i,))
    yield prefix, p


def redexes(p: Path) -> list[tuple[Position, RuleId]]:
    """Every (position, rule) pair that can fire, in strategy order."""
    return [(pos, rule) for pos, node in _postorder(p) for rule in matching_rules(node)]


def step(p: Path) -> RewriteStep | None:
    """One step of the leftmost-innermost strategy, or None at a normal form."""
    for pos, node in _postorder(p):
        for rule in PRIORITY:
            if rule_matches(rule, node):
                return RewriteStep(rule, pos, p, replace_subpath(p, pos, contract(rule, node)))
    return None


def normalize_path(p: Path) -> tuple[Path, Trace]:
    steps = []
    current = p
    while (s := step(current)) is not None:
        steps.append(s)
        current = s.after
    return current, Trace(p, tuple(steps))


def is_normal(p: Path) -> bool:
    return step(p) is None


def rule_step(rule: RuleId | str, before: Path, after: Path) -> RuleStep:
    """Build a level-up step, checking that ``rule`` really rewrites ``before`` into ``after``."""
    rule = RuleId(rule)
    for pos, node in _postorder(before):
        if rule_matches(rule, node) and replace_subpath(before, pos, contract(rule, node)) == after:
            return RuleStep(rule.value, before, after)
    raise RuleNotApplicable(f"{rule} does not rewrite {before} into {after}")


def validate_rule_steps(p: Path) -> None:
    """Check the schema of every rule step leaf inside ``p``."""
    if isinstance(p, RuleStep):
        rule_step(p.rule, p.before, p.after)
        return
    for kid in p.children:
        validate_rule_steps(kid)


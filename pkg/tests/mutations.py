"""Systematic breakages of the built-in derivations, each paired with the error it must raise."""

from __future__ import annotations

from dataclasses import replace
from typing import Callable

from idpaths.errors import EndpointMismatch, RuleMismatch, UndischargedHypothesis
from idpaths.kernel import Derivation, PathJudg, PathWitness, Typing, builtin_constructions
from idpaths.paths import Rho


def find(d: Derivation, rule: str, occurrence: int = 0) -> tuple[int, ...]:
    """Address of the n-th node (preorder) carrying ``rule``."""
    hits = []

    def walk(node, addr):
        if node.rule == rule:
            hits.append(addr)
        for i, kid in enumerate(node.premises):
            walk(kid, addr + (i,))

    walk(d, ())
    return hits[occurrence]


def edit(d: Derivation, addr: tuple[int, ...], fn: Callable[[Derivation], Derivation]) -> Derivation:
    if not addr:
        return fn(d)
    kids = list(d.premises)
    kids[addr[0]] = edit(kids[addr[0]], addr[1:], fn)
    return replace(d, premises=tuple(kids))


def swap_path_judgment(node: Derivation) -> Derivation:
    j = node.conclusion
    return replace(node, conclusion=PathJudg(j.rhs, j.path, j.lhs, j.type))


def swap_witness(node: Derivation) -> Derivation:
    j = node.conclusion
    w = j.subject
    return replace(node, conclusion=Typing(PathWitness(w.path, w.rhs, w.lhs), j.type))


def drop_discharge(node: Derivation) -> Derivation:
    return replace(node, discharged=frozenset())


def retag(rule: str) -> Callable[[Derivation], Derivation]:
    return lambda node: replace(node, rule=rule)


def sigma_leaf_to_rho(node: Derivation) -> Derivation:
    j = node.conclusion
    return replace(node, rule="EqAxiom:rho", premises=(), conclusion=PathJudg(j.lhs, Rho(j.path.source), j.rhs, j.type))


def mutations() -> list[tuple[str, Derivation, type]]:
    b = builtin_constructions()
    refl, symm, trans = b["refl"], b["symm"], b["trans"]
    return [
        ("symm: swapped witness endpoints", edit(symm, find(symm, "IdI1"), swap_witness), EndpointMismatch),
        ("symm: swapped sigma conclusion", edit(symm, find(symm, "EqAxiom:sigma"), swap_path_judgment), EndpointMismatch),
        ("trans: swapped tau conclusion", edit(trans, find(trans, "EqAxiom:tau"), swap_path_judgment), EndpointMismatch),
        ("trans: swapped path hypothesis", edit(trans, find(trans, "Hyp", 2), swap_path_judgment), EndpointMismatch),
        ("refl: term hypothesis kept open", edit(refl, find(refl, "PiI"), drop_discharge), UndischargedHypothesis),
        ("symm: path hypothesis kept open", edit(symm, find(symm, "IdE1"), drop_discharge), UndischargedHypothesis),
        ("trans: inner path hypothesis kept open", edit(trans, find(trans, "IdE1", 1), drop_discharge), UndischargedHypothesis),
        ("symm: sigma leaf tagged tau", edit(symm, find(symm, "EqAxiom:sigma"), retag("EqAxiom:tau")), RuleMismatch),
        ("trans: tau leaf tagged rho", edit(trans, find(trans, "EqAxiom:tau"), retag("EqAxiom:rho")), RuleMismatch),
        ("symm: sigma leaf replaced by rho", edit(symm, find(symm, "EqAxiom:sigma"), sigma_leaf_to_rho), EndpointMismatch),
    ]

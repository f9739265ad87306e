"""Derivation checker for the path-based identity type.

Proof terms, types and judgments are plain immutable data; :func:`check`
walks a natural-deduction tree and accepts it only when every node
instantiates its rule. The REWR reductions live in :func:`reduce_rewr`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from . import paths, terms
from .errors import EndpointMismatch, KernelError, RuleMismatch, RuleNotApplicable, UndischargedHypothesis
from .paths import Atom, Path, Rho, Sigma, Tau, endpoint_eq
from .rewriting import validate_rule_steps

# ---------------------------------------------------------------- types


@dataclass(frozen=True)
class Base:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class IdT:
    carrier: "TypeExpr"
    lhs: "ProofTerm"
    rhs: "ProofTerm"

    def __str__(self):
        return f"Id[{self.carrier}]({self.lhs}, {self.rhs})"


@dataclass(frozen=True)
class Pi:
    binder: str
    domain: "TypeExpr"
    codomain: "TypeExpr"

    def __str__(self):
        return f"Pi({self.binder}:{self.domain}) {self.codomain}"


@dataclass(frozen=True)
class Arrow:
    domain: "TypeExpr"
    codomain: "TypeExpr"

    def __str__(self):
        dom = f"({self.domain})" if isinstance(self.domain, (Pi, Arrow)) else str(self.domain)
        return f"{dom} -> {self.codomain}"


TypeExpr = Union[Base, IdT, Pi, Arrow]

# ---------------------------------------------------------------- proof terms


@dataclass(frozen=True)
class TermVar:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Lam:
    binder: str
    body: "ProofTerm"

    def __str__(self):
        return f"(\\{self.binder}. {self.body})"


@dataclass(frozen=True)
class Apply:
    fun: "ProofTerm"
    arg: "ProofTerm"

    def __str__(self):
        return f"({self.fun} {self.arg})"


@dataclass(frozen=True)
class PathWitness:
    """``s(a,b)``: the inhabitant of ``Id_A(a,b)`` introduced by a path ``s``."""

    path: Path
    lhs: "ProofTerm"
    rhs: "ProofTerm"

    def __str__(self):
        return f"<{self.path}>({self.lhs}, {self.rhs})"


@dataclass(frozen=True)
class Rewr:
    """``REWR(major, bound.minor)``; ``bound`` names a path variable of ``minor``."""

    major: "ProofTerm"
    bound: str
    minor: "ProofTerm"

    def __str__(self):
        return f"REWR({self.major}, {self.bound}. {self.minor})"


@dataclass(frozen=True)
class EmbeddedPath:
    path: Path

    def __str__(self):
        return f"<{self.path}>"


ProofTerm = Union[TermVar, Lam, Apply, PathWitness, Rewr, EmbeddedPath]

# ---------------------------------------------------------------- judgments


@dataclass(frozen=True)
class Typing:
    subject: ProofTerm
    type: TypeExpr

    def __str__(self):
        return f"{self.subject} : {self.type}"


@dataclass(frozen=True)
class PathJudg:
    lhs: ProofTerm
    path: Path
    rhs: ProofTerm
    type: TypeExpr

    def __str__(self):
        return f"{self.lhs} =[{self.path}] {self.rhs} : {self.type}"


@dataclass(frozen=True)
class IsType:
    type: TypeExpr

    def __str__(self):
        return f"type {self.type}"


Judgment = Union[Typing, PathJudg, IsType]

HYP = "Hyp"
AXIOMS = ("rho", "sigma", "tau", "xi", "mu", "nu", "beta", "eta", "alpha")
RULES = ("Hyp", "IdF", "IdI1", "IdI2", "IdE1", "IdE2", "PiI", "PiE", "Rw") + tuple(f"EqAxiom:{a}" for a in AXIOMS)


@dataclass(frozen=True)
class Derivation:
    rule: str
    conclusion: Judgment
    premises: tuple["Derivation", ...] = ()
    discharged: frozenset[str] = frozenset()
    label: str | None = None
    line: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.rule not in RULES:
            raise ValueError(f"unknown rule tag {self.rule!r}")
        object.__setattr__(self, "premises", tuple(self.premises))
        object.__setattr__(self, "discharged", frozenset(self.discharged))

    def nodes(self):
        yield self
        for p in self.premises:
            yield from p.nodes()

    def count(self, rule: str) -> int:
        return sum(1 for n in self.nodes() if n.rule == rule)


# ---------------------------------------------------------------- term utilities


def as_term(pt: ProofTerm) -> terms.Term | None:
    """The lambda term a proof term denotes, when it is built from variables, lambdas and applications."""
    if isinstance(pt, TermVar):
        return terms.Var(pt.name)
    if isinstance(pt, Lam):
        body = as_term(pt.body)
        return None if body is None else terms.Abs(pt.binder, body)
    if isinstance(pt, Apply):
        fun, arg = as_term(pt.fun), as_term(pt.arg)
        return None if fun is None or arg is None else terms.App(fun, arg)
    return None


def from_term(t: terms.Term) -> ProofTerm:
    if isinstance(t, terms.Var):
        return TermVar(t.name)
    if isinstance(t, terms.Abs):
        return Lam(t.binder, from_term(t.body))
    return Apply(from_term(t.fun), from_term(t.arg))


def as_endpoint(pt: ProofTerm) -> paths.Endpoint | None:
    if isinstance(pt, (PathWitness, EmbeddedPath)):
        return pt.path
    return as_term(pt)


def free_vars(pt: ProofTerm) -> frozenset[str]:
    if isinstance(pt, TermVar):
        return frozenset((pt.name,))
    if isinstance(pt, Lam):
        return free_vars(pt.body) - {pt.binder}
    if isinstance(pt, Apply):
        return free_vars(pt.fun) | free_vars(pt.arg)
    if isinstance(pt, PathWitness):
        return free_vars(pt.lhs) | free_vars(pt.rhs) | paths.term_free_vars(pt.path)
    if isinstance(pt, EmbeddedPath):
        return paths.term_free_vars(pt.path)
    return free_vars(pt.major) | free_vars(pt.minor)


def type_free_vars(ty: TypeExpr) -> frozenset[str]:
    if isinstance(ty, Base):
        return frozenset()
    if isinstance(ty, IdT):
        return type_free_vars(ty.carrier) | free_vars(ty.lhs) | free_vars(ty.rhs)
    if isinstance(ty, Pi):
        return type_free_vars(ty.domain) | (type_free_vars(ty.codomain) - {ty.binder})
    return type_free_vars(ty.domain) | type_free_vars(ty.codomain)


def atom_names(pt: ProofTerm) -> set[str]:
    """Path-variable names occurring free in a proof term."""
    if isinstance(pt, (PathWitness, EmbeddedPath)):
        names = paths.atom_names(pt.path)
        if isinstance(pt, PathWitness):
            names |= atom_names(pt.lhs) | atom_names(pt.rhs)
        return names
    if isinstance(pt, Lam):
        return atom_names(pt.body)
    if isinstance(pt, Apply):
        return atom_names(pt.fun) | atom_names(pt.arg)
    if isinstance(pt, Rewr):
        return atom_names(pt.major) | (atom_names(pt.minor) - {pt.bound})
    return set()


def type_atom_names(ty: TypeExpr) -> set[str]:
    if isinstance(ty, IdT):
        return type_atom_names(ty.carrier) | atom_names(ty.lhs) | atom_names(ty.rhs)
    if isinstance(ty, (Pi, Arrow)):
        return type_atom_names(ty.domain) | type_atom_names(ty.codomain)
    return set()


def _map_paths(pt: ProofTerm, f) -> ProofTerm:
    if isinstance(pt, PathWitness):
        return PathWitness(f(pt.path), _map_paths(pt.lhs, f), _map_paths(pt.rhs, f))
    if isinstance(pt, EmbeddedPath):
        return EmbeddedPath(f(pt.path))
    if isinstance(pt, Lam):
        return Lam(pt.binder, _map_paths(pt.body, f))
    if isinstance(pt, Apply):
        return Apply(_map_paths(pt.fun, f), _map_paths(pt.arg, f))
    if isinstance(pt, Rewr):
        return Rewr(_map_paths(pt.major, f), pt.bound, _map_paths(pt.minor, f))
    return pt


def subst(pt: ProofTerm, x: str, n: ProofTerm) -> ProofTerm:
    """Capture-avoiding substitution of ``n`` for the variable ``x``."""
    if x not in free_vars(pt):
        return pt
    if isinstance(pt, TermVar):
        return n
    if isinstance(pt, Lam):
        binder, body = pt.binder, pt.body
        if binder in free_vars(n):
            fresh = terms.fresh_name(binder, free_vars(n) | free_vars(body) | {x})
            body, binder = subst(body, binder, TermVar(fresh)), fresh
        return Lam(binder, subst(body, x, n))
    if isinstance(pt, Apply):
        return Apply(subst(pt.fun, x, n), subst(pt.arg, x, n))
    if isinstance(pt, Rewr):
        bound, minor = pt.bound, pt.minor
        if bound in atom_names(n):
            fresh = terms.fresh_name(bound, atom_names(n) | atom_names(minor) | {bound})
            minor, bound = rename_atom(minor, bound, fresh), fresh
        return Rewr(subst(pt.major, x, n), bound, subst(minor, x, n))
    term = as_term(n)
    if term is None:
        raise ValueError(f"cannot substitute {n} for {x} inside the path of {pt}")
    if isinstance(pt, EmbeddedPath):
        return EmbeddedPath(paths.subst_path_term(pt.path, x, term))
    return PathWitness(paths.subst_path_term(pt.path, x, term), subst(pt.lhs, x, n), subst(pt.rhs, x, n))


def subst_type(ty: TypeExpr, x: str, n: ProofTerm) -> TypeExpr:
    if x not in type_free_vars(ty):
        return ty
    if isinstance(ty, IdT):
        return IdT(subst_type(ty.carrier, x, n), subst(ty.lhs, x, n), subst(ty.rhs, x, n))
    if isinstance(ty, Arrow):
        return Arrow(subst_type(ty.domain, x, n), subst_type(ty.codomain, x, n))
    binder, cod = ty.binder, ty.codomain
    if binder in free_vars(n):
        fresh = terms.fresh_name(binder, free_vars(n) | type_free_vars(cod) | {x})
        cod, binder = subst_type(cod, binder, TermVar(fresh)), fresh
    return Pi(binder, subst_type(ty.domain, x, n), subst_type(cod, x, n))


def rename_atom(pt: ProofTerm, old: str, new: str) -> ProofTerm:
    if isinstance(pt, Rewr):
        minor = pt.minor if pt.bound == old else rename_atom(pt.minor, old, new)
        return Rewr(rename_atom(pt.major, old, new), pt.bound, minor)
    if isinstance(pt, Lam):
        return Lam(pt.binder, rename_atom(pt.body, old, new))
    if isinstance(pt, Apply):
        return Apply(rename_atom(pt.fun, old, new), rename_atom(pt.arg, old, new))
    return _map_paths(pt, lambda p: paths.rename_atom(p, old, new))


def subst_atom(pt: ProofTerm, g: str, m: Path) -> ProofTerm:
    """``h(m/g)``: replace the free path variable ``g`` by the path ``m``."""
    if isinstance(pt, Rewr):
        major = subst_atom(pt.major, g, m)
        if pt.bound == g:
            return Rewr(major, pt.bound, pt.minor)
        bound, minor = pt.bound, pt.minor
        if bound in paths.atom_names(m):
            fresh = terms.fresh_name(bound, paths.atom_names(m) | atom_names(minor) | {bound})
            minor, bound = rename_atom(minor, bound, fresh), fresh
        return Rewr(major, bound, subst_atom(minor, g, m))
    if isinstance(pt, Lam):
        return Lam(pt.binder, subst_atom(pt.body, g, m))
    if isinstance(pt, Apply):
        return Apply(subst_atom(pt.fun, g, m), subst_atom(pt.arg, g, m))
    if isinstance(pt, PathWitness):
        return PathWitness(paths.substitute_atom(pt.path, g, m), pt.lhs, pt.rhs)
    if isinstance(pt, EmbeddedPath):
        return EmbeddedPath(paths.substitute_atom(pt.path, g, m))
    return pt


def instantiate(pt: ProofTerm, args: list[ProofTerm]) -> ProofTerm:
    """Strip leading lambdas by substituting ``args`` for their binders."""
    for arg in args:
        if not isinstance(pt, Lam):
            raise ValueError(f"{pt} is not an abstraction")
        pt = subst(pt.body, pt.binder, arg)
    return pt


# ---------------------------------------------------------------- alpha keys


def _bound(depth: int) -> str:
    # never a parseable identifier, so renaming to it cannot capture
    return f"%{depth}"


def pt_key(pt: ProofTerm, depth: int = 0) -> tuple:
    if isinstance(pt, TermVar):
        return ("v", pt.name)
    if isinstance(pt, Lam):
        return ("lam", pt_key(subst(pt.body, pt.binder, TermVar(_bound(depth))), depth + 1))
    if isinstance(pt, Apply):
        return ("app", pt_key(pt.fun, depth), pt_key(pt.arg, depth))
    if isinstance(pt, PathWitness):
        return ("wit", pt.path.key, pt_key(pt.lhs, depth), pt_key(pt.rhs, depth))
    if isinstance(pt, EmbeddedPath):
        return ("emb", pt.path.key)
    return ("rewr", pt_key(pt.major, depth), pt.bound, pt_key(pt.minor, depth))


def type_key(ty: TypeExpr, depth: int = 0) -> tuple:
    if isinstance(ty, Base):
        return ("base", ty.name)
    if isinstance(ty, IdT):
        return ("id", type_key(ty.carrier, depth), pt_key(ty.lhs, depth), pt_key(ty.rhs, depth))
    if isinstance(ty, Arrow):
        return ("pi", type_key(ty.domain, depth), type_key(ty.codomain, depth + 1))
    cod = subst_type(ty.codomain, ty.binder, TermVar(_bound(depth)))
    return ("pi", type_key(ty.domain, depth), type_key(cod, depth + 1))


def pt_eq(a: ProofTerm, b: ProofTerm) -> bool:
    return a == b or pt_key(a) == pt_key(b)


def type_eq(a: TypeExpr, b: TypeExpr) -> bool:
    """Alpha-equivalence of types; ``D -> C`` and ``Pi(x:D) C`` agree when ``x`` is unused."""
    return a == b or type_key(a) == type_key(b)


# ---------------------------------------------------------------- reductions


def _is_eta_rewr(t: Rewr) -> bool:
    minor = t.minor
    return isinstance(minor, PathWitness) and isinstance(minor.path, Atom) and minor.path.name == t.bound


def reduce_rewr(t: ProofTerm) -> tuple[ProofTerm, str]:
    """One outermost-first REWR reduction; the tag is ``eta``, ``beta`` or ``none``."""
    result = _reduce(t)
    return (t, "none") if result is None else result


def _reduce(t: ProofTerm) -> tuple[ProofTerm, str] | None:
    if isinstance(t, Rewr):
        if _is_eta_rewr(t):
            return t.major, "eta"
        if isinstance(t.major, PathWitness):
            return subst_atom(t.minor, t.bound, t.major.path), "beta"
        for side in ("major", "minor"):
            r = _reduce(getattr(t, side))
            if r is not None:
                parts = {"major": t.major, "minor": t.minor, side: r[0]}
                return Rewr(parts["major"], t.bound, parts["minor"]), r[1]
        return None
    if isinstance(t, Lam):
        r = _reduce(t.body)
        return None if r is None else (Lam(t.binder, r[0]), r[1])
    if isinstance(t, Apply):
        r = _reduce(t.fun)
        if r is not None:
            return Apply(r[0], t.arg), r[1]
        r = _reduce(t.arg)
        return None if r is None else (Apply(t.fun, r[0]), r[1])
    return None


def reduce_rewr_fully(t: ProofTerm, limit: int = 10_000) -> tuple[ProofTerm, list[str]]:
    tags = []
    while len(tags) < limit:
        t, tag = reduce_rewr(t)
        if tag == "none":
            break
        tags.append(tag)
    return t, tags


def count_rewr(t: ProofTerm) -> int:
    if isinstance(t, Rewr):
        return 1 + count_rewr(t.major) + count_rewr(t.minor)
    if isinstance(t, Lam):
        return count_rewr(t.body)
    if isinstance(t, Apply):
        return count_rewr(t.fun) + count_rewr(t.arg)
    return 0


# ---------------------------------------------------------------- checking

Scope = dict[str, TypeExpr]
Open = dict[str, Judgment]


def check(d: Derivation, context: Scope | None = None, assumptions: tuple[Judgment, ...] = ()) -> Judgment:
    """Validate ``d`` and return its conclusion.

    ``context`` declares free term variables. Every hypothesis must be
    discharged inside the tree, except typing hypotheses that merely repeat a
    context declaration and hypotheses listed in ``assumptions``.
    """
    context = dict(context or {})
    still_open = _check(d, context, "root")
    for label, j in still_open.items():
        if isinstance(j, Typing) and isinstance(j.subject, TermVar):
            declared = context.get(j.subject.name)
            if declared is not None and type_eq(declared, j.type):
                continue
        if any(_same_judgment(j, a) for a in assumptions):
            continue
        raise UndischargedHypothesis(f"hypothesis {label!r} ({j}) is never discharged", where=_where(d, "root"))
    return d.conclusion


def _same_judgment(a: Judgment, b: Judgment) -> bool:
    if type(a) is not type(b):
        return False
    if isinstance(a, Typing):
        return pt_eq(a.subject, b.subject) and type_eq(a.type, b.type)
    if isinstance(a, PathJudg):
        return a.path.key == b.path.key and pt_eq(a.lhs, b.lhs) and pt_eq(a.rhs, b.rhs) and type_eq(a.type, b.type)
    return type_eq(a.type, b.type)


def _where(d: Derivation, loc: str) -> str:
    where = f"node {loc} [{d.rule}]"
    return where if d.line is None else f"{where}, line {d.line}"


def _check(d: Derivation, scope: Scope, loc: str) -> Open:
    try:
        _wf_judgment(d.conclusion, scope)
        checker = _RULE_CHECKERS[d.rule.split(":")[0]]
        return checker(d, scope, loc)
    except RuleNotApplicable as exc:
        raise RuleMismatch(str(exc), _where(d, loc)) from exc
    except KernelError as exc:
        raise exc.located(_where(d, loc))


def _premises(d: Derivation, n: int | tuple[int, ...]) -> None:
    allowed = (n,) if isinstance(n, int) else n
    if len(d.premises) not in allowed:
        raise RuleMismatch(f"{d.rule} takes {' or '.join(map(str, allowed))} premises, got {len(d.premises)}")


def _merge(*opens: Open) -> Open:
    merged: Open = {}
    for o in opens:
        for label, j in o.items():
            if label in merged and merged[label] != j:
                raise RuleMismatch(f"hypothesis label {label!r} used for two different judgments")
            merged[label] = j
    return merged


def _sub(d: Derivation, i: int, scope: Scope, loc: str) -> Open:
    return _check(d.premises[i], scope, f"{loc}.{i}")


def _expect(j: Judgment, kind: type, what: str) -> None:
    if not isinstance(j, kind):
        raise RuleMismatch(f"{what} must be a {kind.__name__} judgment, got {j}")


def _same_type(a: TypeExpr, b: TypeExpr, what: str) -> None:
    if not type_eq(a, b):
        raise RuleMismatch(f"{what}: {a} is not {b}")


def _same_end(expected: ProofTerm, found: ProofTerm) -> None:
    if not pt_eq(expected, found):
        raise EndpointMismatch(expected, found)


def _same_path(expected: Path, found: Path, what: str) -> None:
    if expected.key != found.key:
        raise RuleMismatch(f"{what}: path {found} differs from {expected}")


# well-formedness of conclusions


def _wf_judgment(j: Judgment, scope: Scope) -> None:
    if isinstance(j, IsType):
        _wf_type(j.type, scope)
    elif isinstance(j, Typing):
        _wf_type(j.type, scope)
        _wf_witnesses(j.subject)
    elif isinstance(j, PathJudg):
        _wf_type(j.type, scope)
        _wf_witnesses(j.lhs)
        _wf_witnesses(j.rhs)
        validate_rule_steps(j.path)
        for end, found in ((j.path.source, j.lhs), (j.path.target, j.rhs)):
            e = as_endpoint(found)
            if e is not None and not endpoint_eq(end, e):
                raise EndpointMismatch(end, found)
    else:
        raise RuleMismatch(f"not a judgment: {j!r}")


def _wf_witnesses(pt: ProofTerm) -> None:
    if isinstance(pt, PathWitness):
        validate_rule_steps(pt.path)
        for end, found in ((pt.path.source, pt.lhs), (pt.path.target, pt.rhs)):
            e = as_endpoint(found)
            if e is not None and not endpoint_eq(end, e):
                raise EndpointMismatch(end, found)
    elif isinstance(pt, Lam):
        _wf_witnesses(pt.body)
    elif isinstance(pt, Apply):
        _wf_witnesses(pt.fun)
        _wf_witnesses(pt.arg)
    elif isinstance(pt, Rewr):
        _wf_witnesses(pt.major)
        _wf_witnesses(pt.minor)


def _wf_type(ty: TypeExpr, scope: Scope) -> None:
    if isinstance(ty, Base):
        return
    if isinstance(ty, IdT):
        _wf_type(ty.carrier, scope)
        _check_against(ty.lhs, ty.carrier, scope)
        _check_against(ty.rhs, ty.carrier, scope)
    elif isinstance(ty, Pi):
        _wf_type(ty.domain, scope)
        _wf_type(ty.codomain, {**scope, ty.binder: ty.domain})
    elif isinstance(ty, Arrow):
        _wf_type(ty.domain, scope)
        _wf_type(ty.codomain, scope)
    else:
        raise RuleMismatch(f"not a type: {ty!r}")


def _check_against(pt: ProofTerm, carrier: TypeExpr, scope: Scope) -> None:
    """Does ``pt`` inhabit ``carrier``? Only variables and paths carry enough information to tell."""
    if isinstance(pt, TermVar):
        if pt.name not in scope:
            raise RuleMismatch(f"unbound variable {pt.name}")
        _same_type(scope[pt.name], carrier, f"type of {pt.name}")
    elif isinstance(pt, (PathWitness, EmbeddedPath)):
        if not isinstance(carrier, IdT):
            raise RuleMismatch(f"path {pt} used at non-identity type {carrier}")
        _wf_witnesses(pt)
        for end, expected in ((pt.path.source, carrier.lhs), (pt.path.target, carrier.rhs)):
            e = as_endpoint(expected)
            if e is not None and not endpoint_eq(end, e):
                raise EndpointMismatch(expected, end)
    else:
        unbound = free_vars(pt) - scope.keys()
        if unbound:
            raise RuleMismatch(f"unbound variables {sorted(unbound)} in {pt}")


# rule checkers; each returns the hypotheses still open below the node


def _check_hyp(d: Derivation, scope: Scope, loc: str) -> Open:
    _premises(d, 0)
    if not d.label:
        raise RuleMismatch("a hypothesis needs a label")
    j = d.conclusion
    if isinstance(j, IsType):
        raise RuleMismatch("type formation cannot be assumed")
    if isinstance(j, Typing) and isinstance(j.subject, TermVar) and j.subject.name in scope:
        _same_type(scope[j.subject.name], j.type, f"hypothesis {d.label}")
    return {d.label: j}


def _check_idf(d: Derivation, scope: Scope, loc: str) -> Open:
    _premises(d, (2, 3))
    _expect(d.conclusion, IsType, "IdF conclusion")
    ty = d.conclusion.type
    if not isinstance(ty, IdT):
        raise RuleMismatch(f"IdF concludes an identity type, got {ty}")
    opens = [_sub(d, i, scope, loc) for i in range(len(d.premises))]
    prem = [p.conclusion for p in d.premises]
    if len(prem) == 3:
        _expect(prem[0], IsType, "IdF first premise")
        _same_type(prem[0].type, ty.carrier, "IdF carrier")
        prem = prem[1:]
    for j, end in zip(prem, (ty.lhs, ty.rhs)):
        _expect(j, Typing, "IdF premise")
        _same_type(j.type, ty.carrier, "IdF element type")
        _same_end(end, j.subject)
    return _merge(*opens)


def _check_idi1(d: Derivation, scope: Scope, loc: str) -> Open:
    _premises(d, 1)
    opened = _sub(d, 0, scope, loc)
    prem, concl = d.premises[0].conclusion, d.conclusion
    _expect(prem, PathJudg, "IdI1 premise")
    _expect(concl, Typing, "IdI1 conclusion")
    wit, ty = concl.subject, concl.type
    if not isinstance(wit, PathWitness):
        raise RuleMismatch(f"IdI1 concludes a path witness, got {wit}")
    if not isinstance(ty, IdT):
        raise RuleMismatch(f"IdI1 concludes an identity type, got {ty}")
    _same_path(prem.path, wit.path, "IdI1 witness")
    _same_type(prem.type, ty.carrier, "IdI1 carrier")
    for expected, found in ((prem.lhs, wit.lhs), (prem.rhs, wit.rhs), (prem.lhs, ty.lhs), (prem.rhs, ty.rhs)):
        _same_end(expected, found)
    return opened


def _check_idi2(d: Derivation, scope: Scope, loc: str) -> Open:
    _premises(d, 3)
    opens = [_sub(d, i, scope, loc) for i in range(3)]
    s_j, t_j, z_j = (p.conclusion for p in d.premises)
    concl = d.conclusion
    for j in (s_j, t_j, z_j, concl):
        _expect(j, PathJudg, "IdI2 judgment")
    _same_end(s_j.lhs, t_j.lhs)
    _same_end(s_j.rhs, t_j.rhs)
    _same_type(s_j.type, t_j.type, "IdI2 carrier")
    id_type = IdT(s_j.type, s_j.lhs, s_j.rhs)
    _same_type(z_j.type, id_type, "IdI2 path-between-paths type")
    _same_type(concl.type, id_type, "IdI2 conclusion type")
    for end, path in ((z_j.lhs, s_j.path), (z_j.rhs, t_j.path)):
        e = as_endpoint(end)
        if e is None or not endpoint_eq(e, path):
            raise EndpointMismatch(path, end)
    if z_j.path.level < 1:
        raise RuleMismatch("IdI2 needs a path between paths")
    _same_path(z_j.path, concl.path, "IdI2 xi(z)")
    _same_end(PathWitness(s_j.path, s_j.lhs, s_j.rhs), concl.lhs)
    _same_end(PathWitness(t_j.path, t_j.lhs, t_j.rhs), concl.rhs)
    return _merge(*opens)


def _discharge_path_hyp(d: Derivation, minor_open: Open, bound: str, id_type: IdT) -> Open:
    remaining = dict(minor_open)
    for label in d.discharged:
        j = remaining.pop(label, None)
        if j is None:
            continue
        if not isinstance(j, PathJudg) or not isinstance(j.path, Atom):
            raise RuleMismatch(f"{d.rule} can only discharge a path hypothesis, not {label!r}: {j}")
        if j.path.name != bound:
            raise RuleMismatch(f"discharged path variable {j.path.name} is not the bound variable {bound}")
        _same_type(j.type, id_type.carrier, "discharged hypothesis carrier")
        _same_end(id_type.lhs, j.lhs)
        _same_end(id_type.rhs, j.rhs)
    return remaining


def _check_ide1(d: Derivation, scope: Scope, loc: str) -> Open:
    _premises(d, 2)
    major_open = _sub(d, 0, scope, loc)
    minor_open = _sub(d, 1, scope, loc)
    major, minor, concl = d.premises[0].conclusion, d.premises[1].conclusion, d.conclusion
    _expect(major, Typing, "IdE1 major premise")
    _expect(minor, Typing, "IdE1 minor premise")
    _expect(concl, Typing, "IdE1 conclusion")
    if not isinstance(major.type, IdT):
        raise RuleMismatch(f"IdE1 major premise must have an identity type, got {major.type}")
    rewr = concl.subject
    if not isinstance(rewr, Rewr):
        raise RuleMismatch(f"IdE1 concludes a REWR term, got {rewr}")
    if not pt_eq(rewr.major, major.subject):
        raise RuleMismatch(f"REWR major {rewr.major} is not the major premise {major.subject}")
    if not pt_eq(rewr.minor, minor.subject):
        raise RuleMismatch(f"REWR body {rewr.minor} is not the minor premise {minor.subject}")
    _same_type(minor.type, concl.type, "IdE1 result type")
    if rewr.bound in type_atom_names(concl.type):
        raise RuleMismatch(f"bound path variable {rewr.bound} escapes into {concl.type}")
    remaining = _discharge_path_hyp(d, minor_open, rewr.bound, major.type)
    return _merge(major_open, remaining)


def _check_ide2(d: Derivation, scope: Scope, loc: str) -> Open:
    _premises(d, 2)
    major_open = _sub(d, 0, scope, loc)
    minor_open = _sub(d, 1, scope, loc)
    major, minor, concl = d.premises[0].conclusion, d.premises[1].conclusion, d.conclusion
    _expect(major, PathJudg, "IdE2 major premise")
    _expect(minor, Typing, "IdE2 minor premise")
    _expect(concl, PathJudg, "IdE2 conclusion")
    if not isinstance(major.type, IdT):
        raise RuleMismatch(f"IdE2 relates elements of an identity type, got {major.type}")
    left, right = concl.lhs, concl.rhs
    if not isinstance(left, Rewr) or not isinstance(right, Rewr):
        raise RuleMismatch("IdE2 relates two REWR terms")
    if left.bound != right.bound or not pt_eq(left.minor, right.minor) or not pt_eq(left.minor, minor.subject):
        raise RuleMismatch("IdE2 sides must share the minor premise")
    _same_end(major.lhs, left.major)
    _same_end(major.rhs, right.major)
    _same_path(major.path, concl.path, "IdE2 mu(r)")
    _same_type(minor.type, concl.type, "IdE2 result type")
    if left.bound in type_atom_names(concl.type):
        raise RuleMismatch(f"bound path variable {left.bound} escapes into {concl.type}")
    remaining = _discharge_path_hyp(d, minor_open, left.bound, major.type)
    return _merge(major_open, remaining)


def _split_pi(ty: TypeExpr, what: str) -> tuple[str | None, TypeExpr, TypeExpr]:
    if isinstance(ty, Pi):
        return ty.binder, ty.domain, ty.codomain
    if isinstance(ty, Arrow):
        return None, ty.domain, ty.codomain
    raise RuleMismatch(f"{what} must have a Pi or arrow type, got {ty}")


def _check_pii(d: Derivation, scope: Scope, loc: str) -> Open:
    _premises(d, 1)
    concl = d.conclusion
    _expect(concl, Typing, "PiI conclusion")
    lam = concl.subject
    if not isinstance(lam, Lam):
        raise RuleMismatch(f"PiI concludes an abstraction, got {lam}")
    binder, domain, codomain = _split_pi(concl.type, "PiI conclusion")
    if binder is not None and binder != lam.binder:
        codomain = subst_type(codomain, binder, TermVar(lam.binder))
    opened = _sub(d, 0, {**scope, lam.binder: domain}, loc)
    prem = d.premises[0].conclusion
    _expect(prem, Typing, "PiI premise")
    if not pt_eq(prem.subject, lam.body):
        raise RuleMismatch(f"abstraction body {lam.body} is not the premise subject {prem.subject}")
    _same_type(prem.type, codomain, "PiI codomain")
    remaining = dict(opened)
    for label in d.discharged:
        j = remaining.pop(label, None)
        if j is None:
            continue
        if not (isinstance(j, Typing) and j.subject == TermVar(lam.binder)):
            raise RuleMismatch(f"PiI on {lam.binder} cannot discharge {label!r}: {j}")
        _same_type(j.type, domain, f"discharged hypothesis {label}")
    return remaining


def _check_pie(d: Derivation, scope: Scope, loc: str) -> Open:
    _premises(d, 2)
    opens = [_sub(d, i, scope, loc) for i in range(2)]
    fun, arg, concl = d.premises[0].conclusion, d.premises[1].conclusion, d.conclusion
    for j in (fun, arg, concl):
        _expect(j, Typing, "PiE judgment")
    binder, domain, codomain = _split_pi(fun.type, "PiE function")
    _same_type(arg.type, domain, "PiE argument")
    if not isinstance(concl.subject, Apply):
        raise RuleMismatch(f"PiE concludes an application, got {concl.subject}")
    if not pt_eq(concl.subject.fun, fun.subject) or not pt_eq(concl.subject.arg, arg.subject):
        raise RuleMismatch("PiE application does not match its premises")
    result = codomain if binder is None else subst_type(codomain, binder, arg.subject)
    _same_type(concl.type, result, "PiE result")
    return _merge(*opens)


def _check_rw(d: Derivation, scope: Scope, loc: str) -> Open:
    _premises(d, 0)
    _expect(d.conclusion, PathJudg, "Rw conclusion")
    p = d.conclusion.path
    if p.level < 1:
        raise RuleMismatch(f"Rw introduces paths between paths, got level {p.level}")
    if not isinstance(d.conclusion.type, IdT):
        raise RuleMismatch("a path between paths lives in an identity type")
    return {}


def _check_axiom(d: Derivation, scope: Scope, loc: str) -> Open:
    axiom = d.rule.split(":")[1]
    concl = d.conclusion
    _expect(concl, PathJudg, f"{axiom} conclusion")
    p = concl.path
    expected_node = {
        "rho": Rho,
        "sigma": Sigma,
        "tau": Tau,
        "xi": paths.Xi,
        "mu": paths.Mu,
        "nu": paths.Nu,
        "beta": paths.BetaStep,
        "eta": paths.EtaStep,
        "alpha": paths.AlphaStep,
    }[axiom]
    if type(p) is not expected_node:
        raise RuleMismatch(f"axiom {axiom} cannot conclude a {type(p).__name__} path")
    return _AXIOM_CHECKERS.get(axiom, _check_leaf_axiom)(d, scope, loc)


def _check_leaf_axiom(d: Derivation, scope: Scope, loc: str) -> Open:
    # beta, eta and alpha steps carry their own evidence; typing premises are optional
    opens = [_sub(d, i, scope, loc) for i in range(len(d.premises))]
    for prem in d.premises:
        _expect(prem.conclusion, Typing, f"{d.rule} premise")
    for end in (d.conclusion.lhs, d.conclusion.rhs):
        _check_against(end, d.conclusion.type, scope) if not isinstance(end, TermVar) else None
    return _merge(*opens)


def _check_rho(d: Derivation, scope: Scope, loc: str) -> Open:
    _premises(d, (0, 1))
    concl = d.conclusion
    _same_end(concl.lhs, concl.rhs)
    if not d.premises:
        _check_against(concl.lhs, concl.type, scope)
        return {}
    opened = _sub(d, 0, scope, loc)
    prem = d.premises[0].conclusion
    _expect(prem, Typing, "rho premise")
    _same_end(prem.subject, concl.lhs)
    _same_type(prem.type, concl.type, "rho type")
    return opened


def _check_sigma(d: Derivation, scope: Scope, loc: str) -> Open:
    _premises(d, 1)
    opened = _sub(d, 0, scope, loc)
    prem, concl = d.premises[0].conclusion, d.conclusion
    _expect(prem, PathJudg, "sigma premise")
    _same_path(prem.path, concl.path.inner, "sigma")
    _same_end(prem.rhs, concl.lhs)
    _same_end(prem.lhs, concl.rhs)
    _same_type(prem.type, concl.type, "sigma type")
    return opened


def _check_tau(d: Derivation, scope: Scope, loc: str) -> Open:
    _premises(d, 2)
    opens = [_sub(d, i, scope, loc) for i in range(2)]
    first, second, concl = d.premises[0].conclusion, d.premises[1].conclusion, d.conclusion
    _expect(first, PathJudg, "tau first premise")
    _expect(second, PathJudg, "tau second premise")
    _same_path(first.path, concl.path.left, "tau left")
    _same_path(second.path, concl.path.right, "tau right")
    _same_end(first.rhs, second.lhs)
    _same_end(first.lhs, concl.lhs)
    _same_end(second.rhs, concl.rhs)
    _same_type(first.type, concl.type, "tau type")
    _same_type(second.type, concl.type, "tau type")
    return _merge(*opens)


def _check_xi(d: Derivation, scope: Scope, loc: str) -> Open:
    _premises(d, 1)
    concl = d.conclusion
    binder, domain, codomain = _split_pi(concl.type, "xi conclusion")
    x = concl.path.binder
    if binder is not None and binder != x:
        codomain = subst_type(codomain, binder, TermVar(x))
    opened = _sub(d, 0, {**scope, x: domain}, loc)
    prem = d.premises[0].conclusion
    _expect(prem, PathJudg, "xi premise")
    _same_path(prem.path, concl.path.body, "xi body")
    _same_type(prem.type, codomain, "xi codomain")
    return opened


def _check_mu(d: Derivation, scope: Scope, loc: str) -> Open:
    _premises(d, 2)
    opens = [_sub(d, i, scope, loc) for i in range(2)]
    eq, fun, concl = d.premises[0].conclusion, d.premises[1].conclusion, d.conclusion
    _expect(eq, PathJudg, "mu first premise")
    _expect(fun, Typing, "mu second premise")
    _same_path(eq.path, concl.path.arg_path, "mu argument path")
    _same_end(from_term(concl.path.fun), fun.subject)
    binder, domain, codomain = _split_pi(fun.type, "mu function")
    _same_type(eq.type, domain, "mu argument type")
    _same_type(concl.type, codomain, "mu result type")
    return _merge(*opens)


def _check_nu(d: Derivation, scope: Scope, loc: str) -> Open:
    _premises(d, 2)
    opens = [_sub(d, i, scope, loc) for i in range(2)]
    arg, eq, concl = d.premises[0].conclusion, d.premises[1].conclusion, d.conclusion
    _expect(arg, Typing, "nu first premise")
    _expect(eq, PathJudg, "nu second premise")
    _same_path(eq.path, concl.path.fun_path, "nu function path")
    _same_end(from_term(concl.path.arg), arg.subject)
    binder, domain, codomain = _split_pi(eq.type, "nu function path")
    _same_type(arg.type, domain, "nu argument type")
    _same_type(concl.type, codomain, "nu result type")
    return _merge(*opens)


_AXIOM_CHECKERS = {
    "rho": _check_rho,
    "sigma": _check_sigma,
    "tau": _check_tau,
    "xi": _check_xi,
    "mu": _check_mu,
    "nu": _check_nu,
}

_RULE_CHECKERS = {
    "Hyp": _check_hyp,
    "IdF": _check_idf,
    "IdI1": _check_idi1,
    "IdI2": _check_idi2,
    "IdE1": _check_ide1,
    "IdE2": _check_ide2,
    "PiI": _check_pii,
    "PiE": _check_pie,
    "Rw": _check_rw,
    "EqAxiom": _check_axiom,
}


# ---------------------------------------------------------------- built-in constructions


def _refl() -> Derivation:
    A, a = Base("A"), TermVar("a")
    path = Rho(terms.Var("a"))
    hyp = Derivation(HYP, Typing(a, A), label="a")
    rho = Derivation("EqAxiom:rho", PathJudg(a, path, a, A), (hyp,))
    wit = PathWitness(path, a, a)
    intro = Derivation("IdI1", Typing(wit, IdT(A, a, a)), (rho,))
    return Derivation("PiI", Typing(Lam("a", wit), Pi("a", A, IdT(A, a, a))), (intro,), {"a"})


def _symm() -> Derivation:
    A, a, b, p = Base("A"), TermVar("a"), TermVar("b"), TermVar("p")
    t = Atom("t", terms.Var("a"), terms.Var("b"))
    hyp_p = Derivation(HYP, Typing(p, IdT(A, a, b)), label="p")
    hyp_t = Derivation(HYP, PathJudg(a, t, b, A), label="t")
    sym = Derivation("EqAxiom:sigma", PathJudg(b, Sigma(t), a, A), (hyp_t,))
    wit = PathWitness(Sigma(t), b, a)
    intro = Derivation("IdI1", Typing(wit, IdT(A, b, a)), (sym,))
    rewr = Rewr(p, "t", wit)
    elim = Derivation("IdE1", Typing(rewr, IdT(A, b, a)), (hyp_p, intro), {"t"})
    body = Arrow(IdT(A, a, b), IdT(A, b, a))
    lam_p = Derivation("PiI", Typing(Lam("p", rewr), body), (elim,), {"p"})
    lam_b = Derivation("PiI", Typing(Lam("b", Lam("p", rewr)), Pi("b", A, body)), (lam_p,))
    return Derivation(
        "PiI", Typing(Lam("a", Lam("b", Lam("p", rewr))), Pi("a", A, Pi("b", A, body))), (lam_b,)
    )


def _trans() -> Derivation:
    A = Base("A")
    a, b, c, w, s = (TermVar(n) for n in "abcws")
    t = Atom("t", terms.Var("a"), terms.Var("b"))
    u = Atom("u", terms.Var("b"), terms.Var("c"))
    hyp_w = Derivation(HYP, Typing(w, IdT(A, a, b)), label="w")
    hyp_s = Derivation(HYP, Typing(s, IdT(A, b, c)), label="s")
    hyp_t = Derivation(HYP, PathJudg(a, t, b, A), label="t")
    hyp_u = Derivation(HYP, PathJudg(b, u, c, A), label="u")
    comp = Derivation("EqAxiom:tau", PathJudg(a, Tau(t, u), c, A), (hyp_t, hyp_u))
    wit = PathWitness(Tau(t, u), a, c)
    intro = Derivation("IdI1", Typing(wit, IdT(A, a, c)), (comp,))
    inner = Rewr(s, "u", wit)
    elim_inner = Derivation("IdE1", Typing(inner, IdT(A, a, c)), (hyp_s, intro), {"u"})
    outer = Rewr(w, "t", inner)
    elim_outer = Derivation("IdE1", Typing(outer, IdT(A, a, c)), (hyp_w, elim_inner), {"t"})
    ty_s = Arrow(IdT(A, b, c), IdT(A, a, c))
    ty_w = Arrow(IdT(A, a, b), ty_s)
    lam_s = Derivation("PiI", Typing(Lam("s", outer), ty_s), (elim_outer,), {"s"})
    lam_w = Derivation("PiI", Typing(Lam("w", Lam("s", outer)), ty_w), (lam_s,), {"w"})
    term, ty, node = Lam("w", Lam("s", outer)), ty_w, lam_w
    for name in "cba":
        term, ty = Lam(name, term), Pi(name, A, ty)
        node = Derivation("PiI", Typing(term, ty), (node,))
    return node


def builtin_constructions() -> dict[str, Derivation]:
    return {"refl": _refl(), "symm": _symm(), "trans": _trans()}


# ---------------------------------------------------------------- derivations from paths


def axiom_derivation(lhs: ProofTerm, path: Path, rhs: ProofTerm, carrier: TypeExpr) -> Derivation:
    """A derivation of ``lhs =_path rhs : carrier`` from rho/sigma/tau/beta/eta/alpha axioms.

    Atoms become labelled hypotheses named after the atom.
    """
    judg = PathJudg(lhs, path, rhs, carrier)
    if isinstance(path, Atom):
        return Derivation(HYP, judg, label=path.name)
    if isinstance(path, Rho):
        return Derivation("EqAxiom:rho", judg)
    if isinstance(path, Sigma):
        return Derivation("EqAxiom:sigma", judg, (axiom_derivation(rhs, path.inner, lhs, carrier),))
    if isinstance(path, Tau):
        mid = _endpoint_term(path.left.target)
        return Derivation(
            "EqAxiom:tau",
            judg,
            (axiom_derivation(lhs, path.left, mid, carrier), axiom_derivation(mid, path.right, rhs, carrier)),
        )
    if isinstance(path, paths.EtaStep):
        return Derivation("EqAxiom:eta", judg)
    if isinstance(path, paths.BetaStep):
        return Derivation("EqAxiom:beta", judg)
    if isinstance(path, paths.AlphaStep):
        return Derivation("EqAxiom:alpha", judg)
    raise ValueError(f"no axiom derivation for {type(path).__name__} without typing premises")


def _endpoint_term(e: paths.Endpoint) -> ProofTerm:
    return from_term(e) if paths.is_term(e) else EmbeddedPath(e)


def endpoint_term(e: paths.Endpoint) -> ProofTerm:
    return _endpoint_term(e)


# ---------------------------------------------------------------- hand notation


def pretty_type(ty: TypeExpr) -> str:
    if isinstance(ty, Base):
        return ty.name
    if isinstance(ty, IdT):
        carrier = pretty_type(ty.carrier)
        sub = carrier if isinstance(ty.carrier, Base) else "{" + carrier + "}"
        return f"Id_{sub}({pretty(ty.lhs)},{pretty(ty.rhs)})"
    if isinstance(ty, Pi):
        cod = pretty_type(ty.codomain)
        if isinstance(ty.codomain, Arrow):
            cod = f"({cod})"
        return f"Π_({ty.binder}:{pretty_type(ty.domain)}){cod}"
    dom = pretty_type(ty.domain)
    if isinstance(ty.domain, (Pi, Arrow)):
        dom = f"({dom})"
    return f"{dom} → {pretty_type(ty.codomain)}"


def pretty(pt: ProofTerm) -> str:
    if isinstance(pt, TermVar):
        return pt.name
    if isinstance(pt, Lam):
        return f"λ{pt.binder}.{pretty(pt.body)}"
    if isinstance(pt, Apply):
        arg = pretty(pt.arg)
        if isinstance(pt.arg, (Apply, Lam)):
            arg = f"({arg})"
        fun = f"({pretty(pt.fun)})" if isinstance(pt.fun, Lam) else pretty(pt.fun)
        return f"{fun} {arg}"
    if isinstance(pt, PathWitness):
        if isinstance(pt.path, paths.RuleStep):
            return f"{pt.path.rule}({pretty(pt.lhs)}, {pretty(pt.rhs)})"
        head = pt.path.ground()
        if not isinstance(pt.path, (Atom, Rho)):
            head = f"({head})"
        return f"{head}({pretty(pt.lhs)},{pretty(pt.rhs)})"
    if isinstance(pt, EmbeddedPath):
        return pt.path.ground()
    return f"REWR({pretty(pt.major)}, {pt.bound}́.{pretty(pt.minor)})"


def pretty_judgment(j: Judgment) -> str:
    if isinstance(j, Typing):
        return f"{pretty(j.subject)} : {pretty_type(j.type)}"
    if isinstance(j, PathJudg):
        return f"{pretty(j.lhs)} =_{{{j.path.ground()}}} {pretty(j.rhs)} : {pretty_type(j.type)}"
    return f"{pretty_type(j.type)} type"

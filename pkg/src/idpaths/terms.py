"""Untyped lambda terms: alpha-equivalence, substitution and redex discovery.

Terms use named variables. Bound variables are renamed on demand with
counter-suffixed names (``y`` becomes ``y1``, ``y2``, ...), so printed output
stays close to hand-written notation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

from .errors import FuelExhausted

IDENT = re.compile(r"[^\W\d]\w*'*")


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Abs:
    binder: str
    body: "Term"

    def __str__(self) -> str:
        return f"(\\{self.binder}.{self.body})"


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"

    def __str__(self) -> str:
        return f"({self.fun} {self.arg})"


Term = Union[Var, Abs, App]
Position = tuple[int, ...]

BETA = "beta"
ETA = "eta"


@dataclass(frozen=True)
class RedexSite:
    """A redex occurrence: where it is, which kind, and the whole contracted term."""

    position: Position
    kind: str
    result: Term


def free_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, Abs):
        return free_vars(t.body) - {t.binder}
    return free_vars(t.fun) | free_vars(t.arg)


def all_names(t: Term) -> set[str]:
    """Every identifier occurring in ``t``, bound or free."""
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Abs):
        return {t.binder} | all_names(t.body)
    return all_names(t.fun) | all_names(t.arg)


def fresh_name(base: str, avoid: set[str] | frozenset[str]) -> str:
    stem = base.rstrip("'").rstrip("0123456789") or "v"
    i = 1
    while f"{stem}{i}" in avoid:
        i += 1
    return f"{stem}{i}"


def substitute(body: Term, x: str, replacement: Term) -> Term:
    """Capture-avoiding ``[replacement/x]body``."""
    return _subst(body, x, replacement, free_vars(replacement))


def _subst(t: Term, x: str, n: Term, fv_n: frozenset[str]) -> Term:
    if isinstance(t, Var):
        return n if t.name == x else t
    if isinstance(t, App):
        return App(_subst(t.fun, x, n, fv_n), _subst(t.arg, x, n, fv_n))
    if t.binder == x or x not in free_vars(t.body):
        return t
    if t.binder in fv_n:
        fresh = fresh_name(t.binder, fv_n | all_names(t.body) | {x})
        renamed = _subst(t.body, t.binder, Var(fresh), frozenset((fresh,)))
        return Abs(fresh, _subst(renamed, x, n, fv_n))
    return Abs(t.binder, _subst(t.body, x, n, fv_n))


def alpha_key(t: Term, env: tuple[str, ...] = ()) -> tuple:
    """Nameless canonical form; two terms are alpha-equal iff their keys are equal."""
    if isinstance(t, Var):
        for depth, name in enumerate(reversed(env)):
            if name == t.name:
                return ("b", depth)
        return ("f", t.name)
    if isinstance(t, Abs):
        return ("l", alpha_key(t.body, env + (t.binder,)))
    return ("a", alpha_key(t.fun, env), alpha_key(t.arg, env))


def alpha_eq(a: Term, b: Term) -> bool:
    return a == b or alpha_key(a) == alpha_key(b)


def children(t: Term) -> tuple[Term, ...]:
    if isinstance(t, Abs):
        return (t.body,)
    if isinstance(t, App):
        return (t.fun, t.arg)
    return ()


def subterm_at(t: Term, position: Position) -> Term:
    for i in position:
        kids = children(t)
        if i >= len(kids):
            raise IndexError(f"position {list(position)} does not address a subterm")
        t = kids[i]
    return t


def replace_at(t: Term, position: Position, new: Term) -> Term:
    if not position:
        return new
    head, rest = position[0], position[1:]
    if isinstance(t, Abs) and head == 0:
        return Abs(t.binder, replace_at(t.body, rest, new))
    if isinstance(t, App) and head == 0:
        return App(replace_at(t.fun, rest, new), t.arg)
    if isinstance(t, App) and head == 1:
        return App(t.fun, replace_at(t.arg, rest, new))
    raise IndexError(f"position {list(position)} does not address a subterm")


def is_beta_redex(t: Term) -> bool:
    return isinstance(t, App) and isinstance(t.fun, Abs)


def is_eta_redex(t: Term) -> bool:
    return (
        isinstance(t, Abs)
        and isinstance(t.body, App)
        and t.body.arg == Var(t.binder)
        and t.binder not in free_vars(t.body.fun)
    )


def contract(t: Term, kind: str) -> Term:
    """Contract the redex at the root of ``t``."""
    if kind == BETA and is_beta_redex(t):
        return substitute(t.fun.body, t.fun.binder, t.arg)
    if kind == ETA and is_eta_redex(t):
        return t.body.fun
    raise ValueError(f"{t} is not a {kind}-redex")


def contract_at(t: Term, position: Position, kind: str) -> Term:
    return replace_at(t, position, contract(subterm_at(t, position), kind))


def _walk(t: Term, position: Position = ()) -> Iterator[tuple[Position, Term]]:
    yield position, t
    for i, kid in enumerate(children(t)):
        yield from _walk(kid, position + (i,))


def contraction_sites(t: Term) -> list[RedexSite]:
    """All beta and eta redexes of ``t`` in preorder, beta before eta at a node."""
    sites = []
    for position, sub in _walk(t):
        if is_beta_redex(sub):
            sites.append(RedexSite(position, BETA, contract_at(t, position, BETA)))
        if is_eta_redex(sub):
            sites.append(RedexSite(position, ETA, contract_at(t, position, ETA)))
    return sites


def next_site(t: Term) -> RedexSite | None:
    """The site the normalizer contracts next: the first eta site, else the first beta site.

    Eta steps strictly shrink the term, so taking them eagerly never blocks a
    normal form; the beta part is plain leftmost-outermost.
    """
    sites = contraction_sites(t)
    for site in sites:
        if site.kind == ETA:
            return site
    return sites[0] if sites else None


def normalize_term(t: Term, fuel: int = 1000) -> tuple[Term, list[RedexSite]]:
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    history: list[RedexSite] = []
    while (site := next_site(t)) is not None:
        if len(history) >= fuel:
            raise FuelExhausted(f"no normal form within {fuel} steps")
        history.append(site)
        t = site.result
    return t, history


def size(t: Term) -> int:
    return 1 + sum(size(kid) for kid in children(t))


def pretty(t: Term, compact: bool | None = None) -> str:
    """Hand-notation rendering: ``(λx.(λy.yx)(λw.zw))v``.

    Juxtaposition drops the space when every identifier is a single character.
    """
    if compact is None:
        compact = all(len(name) == 1 for name in all_names(t))
    sep = "" if compact else " "
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Abs):
        return f"λ{t.binder}.{pretty(t.body, compact)}"
    fun = pretty(t.fun, compact)
    if isinstance(t.fun, Abs):
        fun = f"({fun})"
    arg = pretty(t.arg, compact)
    if isinstance(t.arg, (Abs, App)):
        arg = f"({arg})"
    return f"{fun}{sep}{arg}"

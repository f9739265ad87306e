"""Computational paths as expression trees with endpoint tracking.

Every node validates itself on construction and caches its source, target,
level and node count, so an ill-formed path cannot exist as a value.
Endpoints are either lambda terms (level-0 paths) or paths (higher levels).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from . import terms
from .errors import EndpointMismatch, NonConsecutive, NotAPath
from .terms import Abs, App, RedexSite, Term

Endpoint = Union[Term, "Path"]

RULE_NAMES = ("sr", "ss", "tr", "tsr", "trr", "tlr", "tt")


def is_term(e) -> bool:
    return isinstance(e, (terms.Var, Abs, App))


def endpoint_key(e: Endpoint) -> tuple:
    if is_term(e):
        return ("term", terms.alpha_key(e))
    return e.key


def endpoint_eq(a: Endpoint, b: Endpoint) -> bool:
    """Structural equality up to alpha-renaming of the terms inside."""
    if a is b:
        return True
    if is_term(a) != is_term(b):
        return False
    return endpoint_key(a) == endpoint_key(b)


def endpoint_level(e: Endpoint) -> int:
    """-1 for terms, the path level otherwise."""
    return -1 if is_term(e) else e.level


def show_end(e: Endpoint) -> str:
    return str(e) if is_term(e) else "{" + str(e) + "}"


def ground_end(e: Endpoint) -> str:
    return terms.pretty(e) if is_term(e) else e.ground()


class Path:
    """Common behaviour of path nodes; concrete nodes are frozen dataclasses."""

    source: Endpoint
    target: Endpoint
    level: int
    size: int

    def _seal(self, source: Endpoint, target: Endpoint, size: int) -> None:
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "level", endpoint_level(source) + 1)
        object.__setattr__(self, "size", size)
        object.__setattr__(self, "_key", None)

    @property
    def children(self) -> tuple["Path", ...]:
        return ()

    def with_children(self, kids: tuple["Path", ...]) -> "Path":
        return self

    @property
    def key(self) -> tuple:
        """Alpha-insensitive structural key, computed once."""
        k = self._key
        if k is None:
            k = self._make_key()
            object.__setattr__(self, "_key", k)
        return k

    def _make_key(self) -> tuple:
        raise NotImplementedError

    def ground(self) -> str:
        raise NotImplementedError


def _check_same_level(a: Endpoint, b: Endpoint) -> None:
    if endpoint_level(a) != endpoint_level(b):
        raise EndpointMismatch(f"level {endpoint_level(a) + 1} endpoint", f"level {endpoint_level(b) + 1} endpoint")


@dataclass(frozen=True)
class Rho(Path):
    at: Endpoint

    def __post_init__(self):
        self._seal(self.at, self.at, 1)

    def _make_key(self):
        return ("rho", endpoint_key(self.at))

    def __str__(self):
        return f"rho[{show_end(self.at)}]"

    def ground(self):
        return "ρ"


@dataclass(frozen=True)
class BetaStep(Path):
    site: RedexSite
    subject: Term

    kind = terms.BETA
    tag = "beta"
    symbol = "β"

    def __post_init__(self):
        _check_site(self.site, self.subject, self.kind)
        self._seal(self.subject, self.site.result, 1)

    def _make_key(self):
        return (self.tag, terms.alpha_key(self.subject), self.site.position)

    def __str__(self):
        return f"{self.tag}[{self.subject} => {self.site.result}]"

    def ground(self):
        return f"{self.symbol}({terms.pretty(self.subject)},{terms.pretty(self.site.result)})"


@dataclass(frozen=True)
class EtaStep(BetaStep):
    kind = terms.ETA
    tag = "eta"
    symbol = "η"


def _check_site(site: RedexSite, subject: Term, kind: str) -> None:
    if site.kind != kind:
        raise ValueError(f"expected a {kind} site, got {site.kind}")
    try:
        expected = terms.contract_at(subject, site.position, kind)
    except (ValueError, IndexError) as exc:
        raise ValueError(f"no {kind}-redex at {list(site.position)} in {subject}") from exc
    if not terms.alpha_eq(expected, site.result):
        raise EndpointMismatch(expected, site.result)


@dataclass(frozen=True)
class AlphaStep(Path):
    lhs: Term
    rhs: Term

    def __post_init__(self):
        if not terms.alpha_eq(self.lhs, self.rhs):
            raise EndpointMismatch(self.lhs, self.rhs)
        self._seal(self.lhs, self.rhs, 1)

    def _make_key(self):
        return ("alpha", terms.alpha_key(self.lhs))

    def __str__(self):
        return f"alpha[{self.lhs} => {self.rhs}]"

    def ground(self):
        return f"α({terms.pretty(self.lhs)},{terms.pretty(self.rhs)})"


@dataclass(frozen=True)
class Atom(Path):
    """A path variable with declared endpoints."""

    name: str
    src: Endpoint
    tgt: Endpoint

    def __post_init__(self):
        _check_same_level(self.src, self.tgt)
        self._seal(self.src, self.tgt, 1)

    def _make_key(self):
        return ("atom", self.name, endpoint_key(self.src), endpoint_key(self.tgt))

    def __str__(self):
        return f"#{self.name}: {show_end(self.src)} -> {show_end(self.tgt)}"

    def ground(self):
        return self.name


@dataclass(frozen=True)
class Sigma(Path):
    inner: Path

    def __post_init__(self):
        self._seal(self.inner.target, self.inner.source, 1 + self.inner.size)

    @property
    def children(self):
        return (self.inner,)

    def with_children(self, kids):
        return Sigma(*kids)

    def _make_key(self):
        return ("sigma", self.inner.key)

    def __str__(self):
        return f"sigma({self.inner})"

    def ground(self):
        return f"σ({self.inner.ground()})"


@dataclass(frozen=True)
class Tau(Path):
    left: Path
    right: Path

    def __post_init__(self):
        if not endpoint_eq(self.left.target, self.right.source):
            raise EndpointMismatch(self.left.target, self.right.source)
        self._seal(self.left.source, self.right.target, 1 + self.left.size + self.right.size)

    @property
    def children(self):
        return (self.left, self.right)

    def with_children(self, kids):
        return Tau(*kids)

    def _make_key(self):
        return ("tau", self.left.key, self.right.key)

    def __str__(self):
        return f"tau({self.left}, {self.right})"

    def ground(self):
        return f"τ({self.left.ground()},{self.right.ground()})"


def _require_level0(p: Path, what: str) -> None:
    if p.level != 0:
        raise EndpointMismatch(f"a level-0 path under {what}", f"level {p.level}")


@dataclass(frozen=True)
class Xi(Path):
    """Congruence under abstraction: from M = M' infer λx.M = λx.M'."""

    binder: str
    body: Path

    def __post_init__(self):
        _require_level0(self.body, "xi")
        self._seal(Abs(self.binder, self.body.source), Abs(self.binder, self.body.target), 1 + self.body.size)

    @property
    def children(self):
        return (self.body,)

    def with_children(self, kids):
        return Xi(self.binder, *kids)

    def _make_key(self):
        # the binder is part of the endpoints, so it is kept verbatim
        return ("xi", self.binder, self.body.key)

    def __str__(self):
        return f"xi({self.binder}. {self.body})"

    def ground(self):
        return f"ξ({self.binder}.{self.body.ground()})"


@dataclass(frozen=True)
class Mu(Path):
    """Right congruence: from M = M' infer NM = NM'."""

    fun: Term
    arg_path: Path

    def __post_init__(self):
        _require_level0(self.arg_path, "mu")
        self._seal(App(self.fun, self.arg_path.source), App(self.fun, self.arg_path.target), 1 + self.arg_path.size)

    @property
    def children(self):
        return (self.arg_path,)

    def with_children(self, kids):
        return Mu(self.fun, *kids)

    def _make_key(self):
        return ("mu", terms.alpha_key(self.fun), self.arg_path.key)

    def __str__(self):
        return f"mu({self.fun}, {self.arg_path})"

    def ground(self):
        return f"μ({terms.pretty(self.fun)},{self.arg_path.ground()})"


@dataclass(frozen=True)
class Nu(Path):
    """Left congruence: from M = M' infer MN = M'N."""

    fun_path: Path
    arg: Term

    def __post_init__(self):
        _require_level0(self.fun_path, "nu")
        self._seal(App(self.fun_path.source, self.arg), App(self.fun_path.target, self.arg), 1 + self.fun_path.size)

    @property
    def children(self):
        return (self.fun_path,)

    def with_children(self, kids):
        return Nu(*kids, self.arg)

    def _make_key(self):
        return ("nu", self.fun_path.key, terms.alpha_key(self.arg))

    def __str__(self):
        return f"nu({self.fun_path}, {self.arg})"

    def ground(self):
        return f"ν({self.fun_path.ground()},{terms.pretty(self.arg)})"


@dataclass(frozen=True)
class RuleStep(Path):
    """One named rewrite between two paths; a path one level up.

    Only endpoint agreement is checked here. Schema conformance belongs to
    :func:`idpaths.rewriting.rule_step`.
    """

    rule: str
    before: Path
    after: Path

    def __post_init__(self):
        if self.rule not in RULE_NAMES:
            raise ValueError(f"unknown rule {self.rule!r}")
        if not isinstance(self.before, Path) or not isinstance(self.after, Path):
            raise EndpointMismatch("paths on both sides of a rule step", (self.before, self.after))
        if not endpoint_eq(self.before.source, self.after.source):
            raise EndpointMismatch(self.before.source, self.after.source)
        if not endpoint_eq(self.before.target, self.after.target):
            raise EndpointMismatch(self.before.target, self.after.target)
        self._seal(self.before, self.after, 1)

    def _make_key(self):
        return ("rule", self.rule, self.before.key, self.after.key)

    def __str__(self):
        return f"{self.rule}{{{self.before} => {self.after}}}"

    def ground(self):
        return f"{self.rule}({self.before.ground()},{self.after.ground()})"


def source(p: Path) -> Endpoint:
    return p.source


def target(p: Path) -> Endpoint:
    return p.target


def mk_rho(e: Endpoint) -> Path:
    return Rho(e)


def mk_sigma(p: Path) -> Path:
    return Sigma(p)


def mk_tau(p: Path, q: Path) -> Path:
    return Tau(p, q)


def mk_xi(binder: str, body: Path) -> Path:
    return Xi(binder, body)


def mk_mu(fun: Term, arg_path: Path) -> Path:
    return Mu(fun, arg_path)


def mk_nu(fun_path: Path, arg: Term) -> Path:
    return Nu(fun_path, arg)


def compose(parts: list[Path]) -> Path:
    """Left-associated chain ``tau(tau(p1, p2), p3)``; needs at least one part."""
    result = parts[0]
    for p in parts[1:]:
        result = Tau(result, p)
    return result


def basic_step(subject: Term, site: RedexSite) -> Path:
    cls = BetaStep if site.kind == terms.BETA else EtaStep
    return cls(site, subject)


def path_from_history(start: Term, history: list[RedexSite]) -> Path:
    if not history:
        return Rho(start)
    steps = []
    current = start
    for i, site in enumerate(history):
        try:
            steps.append(basic_step(current, site))
        except (ValueError, EndpointMismatch) as exc:
            raise NonConsecutive(f"step {i} does not apply to {current}: {exc}") from exc
        current = site.result
    return compose(steps)


def find_betaeta_path(m: Term, n: Term, fuel: int = 1000) -> Path | None:
    """A path from ``m`` to ``n`` through their common normal form, or None."""
    nf_m, hist_m = terms.normalize_term(m, fuel)
    nf_n, hist_n = terms.normalize_term(n, fuel)
    if not terms.alpha_eq(nf_m, nf_n):
        return None
    parts = []
    if hist_m:
        parts.append(path_from_history(m, hist_m))
    if nf_m != nf_n:
        parts.append(AlphaStep(nf_m, nf_n))
    if hist_n:
        parts.append(Sigma(path_from_history(n, hist_n)))
    if not parts:
        return Rho(m)
    return compose(parts)


def subpath_at(p: Path, position: tuple[int, ...]) -> Path:
    for i in position:
        kids = p.children
        if i >= len(kids):
            raise IndexError(f"position {list(position)} does not address a subpath")
        p = kids[i]
    return p


def replace_subpath(p: Path, position: tuple[int, ...], new: Path) -> Path:
    if not position:
        return new
    kids = list(p.children)
    head = position[0]
    if head >= len(kids):
        raise IndexError(f"position {list(position)} does not address a subpath")
    kids[head] = replace_subpath(kids[head], position[1:], new)
    return p.with_children(tuple(kids))


def positions(p: Path, prefix: tuple[int, ...] = ()) -> list[tuple[int, ...]]:
    """Node addresses in postorder (children left to right, then the node)."""
    out = []
    for i, kid in enumerate(p.children):
        out.extend(positions(kid, prefix + (i,)))
    out.append(prefix)
    return out


def atom_names(p: Path) -> set[str]:
    if isinstance(p, Atom):
        names = {p.name}
        for e in (p.src, p.tgt):
            if not is_term(e):
                names |= atom_names(e)
        return names
    if isinstance(p, Rho):
        return set() if is_term(p.at) else atom_names(p.at)
    if isinstance(p, RuleStep):
        return atom_names(p.before) | atom_names(p.after)
    names: set[str] = set()
    for kid in p.children:
        names |= atom_names(kid)
    return names


def substitute_atom(p: Path, name: str, replacement: Path) -> Path:
    """Replace every atom called ``name`` by ``replacement``.

    The replacement must have the atom's declared endpoints (up to alpha).
    """
    if isinstance(p, Atom):
        if p.name == name:
            if not endpoint_eq(p.source, replacement.source):
                raise EndpointMismatch(p.source, replacement.source)
            if not endpoint_eq(p.target, replacement.target):
                raise EndpointMismatch(p.target, replacement.target)
            return replacement
        src, tgt = _sub_end(p.src, name, replacement), _sub_end(p.tgt, name, replacement)
        return p if (src, tgt) == (p.src, p.tgt) else Atom(p.name, src, tgt)
    if isinstance(p, Rho):
        at = _sub_end(p.at, name, replacement)
        return p if at is p.at else Rho(at)
    if isinstance(p, RuleStep):
        return RuleStep(p.rule, substitute_atom(p.before, name, replacement), substitute_atom(p.after, name, replacement))
    kids = p.children
    if not kids:
        return p
    return p.with_children(tuple(substitute_atom(k, name, replacement) for k in kids))


def _sub_end(e: Endpoint, name: str, replacement: Path) -> Endpoint:
    return e if is_term(e) else substitute_atom(e, name, replacement)


def level(e: Endpoint) -> int:
    if is_term(e):
        raise NotAPath(f"{e} is a term, not a path")
    return e.level



def rename_atom(p: Path, old: str, new: str) -> Path:
    if isinstance(p, Atom):
        src, tgt = _rename_end(p.src, old, new), _rename_end(p.tgt, old, new)
        return Atom(new if p.name == old else p.name, src, tgt)
    if isinstance(p, Rho):
        return Rho(_rename_end(p.at, old, new))
    if isinstance(p, RuleStep):
        return RuleStep(p.rule, rename_atom(p.before, old, new), rename_atom(p.after, old, new))
    kids = p.children
    if not kids:
        return p
    return p.with_children(tuple(rename_atom(k, old, new) for k in kids))


def _rename_end(e: Endpoint, old: str, new: str) -> Endpoint:
    return e if is_term(e) else rename_atom(e, old, new)


def term_free_vars(p: Path) -> frozenset[str]:
    """Free lambda variables of every term mentioned by ``p``."""
    if isinstance(p, Rho):
        return _end_vars(p.at)
    if isinstance(p, BetaStep):
        return terms.free_vars(p.subject)
    if isinstance(p, AlphaStep):
        return terms.free_vars(p.lhs) | terms.free_vars(p.rhs)
    if isinstance(p, Atom):
        return _end_vars(p.src) | _end_vars(p.tgt)
    if isinstance(p, RuleStep):
        return term_free_vars(p.before) | term_free_vars(p.after)
    if isinstance(p, Xi):
        return term_free_vars(p.body) - {p.binder}
    out = frozenset()
    if isinstance(p, Mu):
        out = terms.free_vars(p.fun)
    if isinstance(p, Nu):
        out = terms.free_vars(p.arg)
    for kid in p.children:
        out |= term_free_vars(kid)
    return out


def _end_vars(e: Endpoint) -> frozenset[str]:
    return terms.free_vars(e) if is_term(e) else term_free_vars(e)


def subst_path_term(p: Path, x: str, n: Term) -> Path:
    """Capture-avoiding substitution of the lambda term ``n`` for ``x`` in every term of ``p``."""
    if x not in term_free_vars(p):
        return p
    sub = lambda t: terms.substitute(t, x, n)  # noqa: E731
    end = lambda e: sub(e) if is_term(e) else subst_path_term(e, x, n)  # noqa: E731
    if isinstance(p, Rho):
        return Rho(end(p.at))
    if isinstance(p, BetaStep):
        subject = sub(p.subject)
        site = RedexSite(p.site.position, p.kind, terms.contract_at(subject, p.site.position, p.kind))
        return type(p)(site, subject)
    if isinstance(p, AlphaStep):
        return AlphaStep(sub(p.lhs), sub(p.rhs))
    if isinstance(p, Atom):
        return Atom(p.name, end(p.src), end(p.tgt))
    if isinstance(p, RuleStep):
        return RuleStep(p.rule, subst_path_term(p.before, x, n), subst_path_term(p.after, x, n))
    if isinstance(p, Xi):
        binder, body = p.binder, p.body
        if binder in terms.free_vars(n):
            fresh = terms.fresh_name(binder, terms.free_vars(n) | term_free_vars(body) | {x})
            body = subst_path_term(body, binder, terms.Var(fresh))
            binder = fresh
        return Xi(binder, subst_path_term(body, x, n))
    if isinstance(p, Mu):
        return Mu(sub(p.fun), subst_path_term(p.arg_path, x, n))
    if isinstance(p, Nu):
        return Nu(subst_path_term(p.fun_path, x, n), sub(p.arg))
    return p.with_children(tuple(subst_path_term(k, x, n) for k in p.children))

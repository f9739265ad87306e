from __future__ import annotations

import sys
from pathlib import Path

from hypothesis import settings, strategies as st

from idpaths import paths, terms
from idpaths.paths import Atom, Rho, Sigma, Tau
from idpaths.terms import Abs, App, Var

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")

NAMES = ("x", "y", "z", "w", "v")


@st.composite
def lambda_terms(draw, depth: int = 4):
    if depth == 0 or draw(st.integers(0, 3)) == 0:
        return Var(draw(st.sampled_from(NAMES)))
    if draw(st.booleans()):
        return Abs(draw(st.sampled_from(NAMES)), draw(lambda_terms(depth - 1)))
    return App(draw(lambda_terms(depth - 1)), draw(lambda_terms(depth - 1)))


VERTICES = tuple(Var(v) for v in "abcd")
CHAIN = tuple(Atom(n, VERTICES[i], VERTICES[i + 1]) for i, n in enumerate("pqr"))


@st.composite
def chain_paths(draw, depth: int = 4):
    """Well-formed rho/sigma/tau paths over the chain a -> b -> c -> d."""
    choice = draw(st.integers(0, 4)) if depth > 0 else draw(st.integers(0, 1))
    if choice == 0:
        return draw(st.sampled_from(CHAIN))
    if choice == 1:
        return Rho(draw(st.sampled_from(VERTICES)))
    if choice == 2:
        return Sigma(draw(chain_paths(depth - 1)))
    left = draw(chain_paths(depth - 1))
    right = draw(chain_paths_from(left.target, depth - 1))
    return Tau(left, right)


@st.composite
def chain_paths_from(draw, start, depth: int = 3):
    """A path starting at ``start``; built to fit so composition always type-checks."""
    i = VERTICES.index(start)
    choice = draw(st.integers(0, 3)) if depth > 0 else 0
    if choice == 0:
        if i < len(CHAIN) and draw(st.booleans()):
            return CHAIN[i]
        if i > 0 and draw(st.booleans()):
            return Sigma(CHAIN[i - 1])
        return Rho(start)
    if choice == 1:
        inner = draw(chain_paths_from(start, depth - 1))
        return Sigma(Sigma(inner))
    first = draw(chain_paths_from(start, depth - 1))
    return Tau(first, draw(chain_paths_from(first.target, depth - 1)))


def node_count(p) -> int:
    """Independent node walk over dataclass fields."""
    if isinstance(p, Sigma):
        return 1 + node_count(p.inner)
    if isinstance(p, Tau):
        return 1 + node_count(p.left) + node_count(p.right)
    if isinstance(p, (paths.Xi,)):
        return 1 + node_count(p.body)
    if isinstance(p, paths.Mu):
        return 1 + node_count(p.arg_path)
    if isinstance(p, paths.Nu):
        return 1 + node_count(p.fun_path)
    return 1


def recompute_ends(p):
    """Source and target computed from the constructors' meaning, ignoring cached fields."""
    if isinstance(p, Rho):
        return p.at, p.at
    if isinstance(p, Atom):
        return p.src, p.tgt
    if isinstance(p, paths.RuleStep):
        return p.before, p.after
    if isinstance(p, paths.BetaStep):
        return p.subject, terms.contract_at(p.subject, p.site.position, p.kind)
    if isinstance(p, paths.AlphaStep):
        return p.lhs, p.rhs
    if isinstance(p, Sigma):
        s, t = recompute_ends(p.inner)
        return t, s
    if isinstance(p, Tau):
        return recompute_ends(p.left)[0], recompute_ends(p.right)[1]
    if isinstance(p, paths.Xi):
        s, t = recompute_ends(p.body)
        return Abs(p.binder, s), Abs(p.binder, t)
    if isinstance(p, paths.Mu):
        s, t = recompute_ends(p.arg_path)
        return App(p.fun, s), App(p.fun, t)
    s, t = recompute_ends(p.fun_path)
    return App(s, p.arg), App(t, p.arg)


def same_end(a, b) -> bool:
    """Endpoint comparison: alpha-equality on terms, printed form on paths."""
    if paths.is_term(a) or paths.is_term(b):
        return paths.is_term(a) and paths.is_term(b) and terms.alpha_eq(a, b)
    return str(a) == str(b)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for line in module.RESULTS:
        terminalreporter.write_line(line)

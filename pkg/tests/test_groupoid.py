from __future__ import annotations

import random

import pytest
from conftest import chain_paths
from hypothesis import given

from idpaths import groupoid
from idpaths.errors import MalformedTower, NotAPath
from idpaths.groupoid import GlobularInstance, TowerConfig, globular_check, level, verify_all, verify_law
from idpaths.kernel import check
from idpaths.paths import Atom, Rho, RuleStep, Sigma, Tau
from idpaths.rewriting import normalize_path
from idpaths.terms import Var

x, y = Var("x"), Var("y")
r = Atom("r", x, y)

# the six inhabitants, written by hand; assoc ends at w because its third atom is z -> w
EXPECTED = {
    "assoc": "tt(τ(τ(p,q),r), τ(p,τ(q,r))) : Id_{Id_A(x,w)}(τ(τ(p,q),r),τ(p,τ(q,r)))",
    "left_unit": "tlr(τ(ρ,r), r) : Id_{Id_A(x,y)}(τ(ρ,r),r)",
    "right_unit": "trr(τ(r,ρ), r) : Id_{Id_A(x,y)}(τ(r,ρ),r)",
    "left_inverse": "tsr(τ(σ(r),r), ρ) : Id_{Id_A(y,y)}(τ(σ(r),r),ρ)",
    "right_inverse": "tr(τ(r,σ(r)), ρ) : Id_{Id_A(x,x)}(τ(r,σ(r)),ρ)",
    "double_sym": "ss(σ(σ(r)), r) : Id_{Id_A(x,y)}(σ(σ(r)),r)",
}


def test_six_laws_in_order():
    witnesses = verify_all()
    assert [w.law for w in witnesses] == list(EXPECTED)
    assert [w.rules for w in witnesses] == [["tt"], ["tlr"], ["trr"], ["tsr"], ["tr"], ["ss"]]


@pytest.mark.parametrize("name", list(EXPECTED))
def test_inhabitant_rendering(name):
    w = verify_law(groupoid.law(name))
    assert w.rendered() == EXPECTED[name]
    assert w.normal_form == normalize_path(w.rhs)[0]
    check(w.derivation, groupoid._point_context(w.lhs))


@pytest.mark.parametrize("name", list(EXPECTED))
def test_witness_runs_between_the_two_sides(name):
    w = verify_law(groupoid.law(name))
    assert w.path.source == w.lhs and w.path.target == w.rhs
    assert level(w.path) == 1


def test_laws_hold_for_compound_atoms():
    p = Tau(Atom("a", x, y), Sigma(Atom("b", x, y)))
    w = verify_law(groupoid.law("double_sym"), {"r": p})
    assert w.normal_form == p


def test_levels():
    assert level(r) == 0
    with pytest.raises(NotAPath):
        level(x)
    one = RuleStep("ss", Sigma(Sigma(r)), r)
    assert level(one) == 1
    assert level(Rho(r)) == 1 and level(Rho(one)) == 2
    up = RuleStep("ss", Sigma(Sigma(one)), one)
    assert level(up) == 2


@given(chain_paths())
def test_normalization_keeps_the_level(p):
    assert level(normalize_path(p)[0]) == level(p)


def test_hand_built_tower():
    a, b = Var("a"), Var("b")
    p = Atom("p", a, b)
    w = Sigma(Sigma(p))
    z = RuleStep("ss", w, p)
    tower = GlobularInstance(((a, b), (w, p), (z,)))
    assert tower.depth == 2 and globular_check(tower)


def test_tower_depth_one_is_rejected():
    a, b = Var("a"), Var("b")
    with pytest.raises(MalformedTower):
        globular_check(GlobularInstance(((a, b), (Atom("p", a, b),))))


def test_misaligned_tower_is_rejected():
    a, b, c = Var("a"), Var("b"), Var("c")
    p = Atom("p", a, b)
    stray = RuleStep("ss", Sigma(Sigma(Atom("q", a, c))), Atom("q", a, c))
    with pytest.raises(MalformedTower):
        globular_check(GlobularInstance(((a, b), (p,), (stray,))))


def test_term_in_upper_layer_is_rejected():
    a, b = Var("a"), Var("b")
    with pytest.raises(MalformedTower):
        globular_check(GlobularInstance(((a, b), (Atom("p", a, b),), (a,))))


def test_random_towers_are_reproducible_and_globular():
    config = TowerConfig(count=50, seed=7)
    first, second = groupoid.random_towers(config), groupoid.random_towers(config)
    assert first == second
    assert all(2 <= t.depth <= 4 and globular_check(t) for t in first)


def test_random_path_runs_between_the_requested_ends():
    rng = random.Random(3)
    a, b = Var("a"), Var("b")
    base = Atom("p", a, b)
    for _ in range(200):
        p = groupoid.random_path(rng, a, b, rng.randint(1, 8), base)
        assert p.source == a and p.target == b


def test_tower_config_limits():
    with pytest.raises(ValueError):
        TowerConfig(min_depth=1)
    with pytest.raises(ValueError):
        TowerConfig(min_depth=4, max_depth=3)

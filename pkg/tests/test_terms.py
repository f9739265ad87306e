from __future__ import annotations

import itertools

import pytest
from conftest import lambda_terms
from hypothesis import given, strategies as st

from idpaths.errors import FuelExhausted
from idpaths.syntax import parse_term
from idpaths.terms import (
    BETA,
    ETA,
    Abs,
    App,
    Var,
    alpha_eq,
    contract_at,
    contraction_sites,
    free_vars,
    fresh_name,
    normalize_term,
    pretty,
    subterm_at,
    substitute,
)

M = parse_term(r"(\x.(\y.y x)(\w.z w)) v")


# -- oracle: textbook substitution after renaming every binder apart ---------

_counter = itertools.count()


def _rename_apart(t):
    if isinstance(t, Var):
        return t
    if isinstance(t, App):
        return App(_rename_apart(t.fun), _rename_apart(t.arg))
    fresh = f"_g{next(_counter)}"
    return Abs(fresh, _rename_apart(_naive(t.body, t.binder, Var(fresh))))


def _naive(t, x, n):
    """Substitution that is only correct when no binder of ``t`` is free in ``n``."""
    if isinstance(t, Var):
        return n if t.name == x else t
    if isinstance(t, App):
        return App(_naive(t.fun, x, n), _naive(t.arg, x, n))
    if t.binder == x:
        return t
    return Abs(t.binder, _naive(t.body, x, n))


def oracle_substitute(body, x, n):
    return _naive(_rename_apart(body), x, n)


# -- free variables -----------------------------------------------------------


def test_free_vars_examples():
    assert free_vars(Var("x")) == {"x"}
    assert free_vars(Abs("x", App(Var("x"), Var("y")))) == {"y"}
    assert free_vars(M) == {"z", "v"}


# -- substitution -------------------------------------------------------------


def test_substitute_variable_hit():
    n = parse_term(r"\a.a")
    assert substitute(Var("x"), "x", n) == n


def test_substitute_derived_example():
    lam = Abs("w", App(Var("z"), Var("w")))
    result = substitute(App(Var("y"), Var("v")), "y", lam)
    assert result == App(lam, Var("v"))
    assert alpha_eq(result, oracle_substitute(App(Var("y"), Var("v")), "y", lam))


def test_substitute_avoids_capture():
    result = substitute(Abs("y", Var("x")), "x", Var("y"))
    assert isinstance(result, Abs) and result.binder != "y"
    assert result.body == Var("y")
    assert result == Abs("y1", Var("y"))


@given(lambda_terms(), st.sampled_from("xyzwv"), lambda_terms(3))
def test_substitute_matches_oracle(body, x, n):
    assert alpha_eq(substitute(body, x, n), oracle_substitute(body, x, n))


@given(lambda_terms(), st.sampled_from("xyzwv"))
def test_substitute_fresh_variable_free_vars(body, x):
    z = fresh_name("fresh", free_vars(body))
    assert free_vars(substitute(body, x, Var(z))) <= (free_vars(body) - {x}) | {z}


# -- alpha equivalence --------------------------------------------------------


def test_alpha_examples():
    assert alpha_eq(Abs("x", Var("x")), Abs("y", Var("y")))
    assert alpha_eq(Abs("x", Var("z")), Abs("y", Var("z")))
    assert not alpha_eq(Abs("x", Var("x")), Abs("x", Var("z")))


@given(lambda_terms(), lambda_terms(), lambda_terms())
def test_alpha_is_an_equivalence(a, b, c):
    assert alpha_eq(a, a)
    assert alpha_eq(a, b) == alpha_eq(b, a)
    if alpha_eq(a, b) and alpha_eq(b, c):
        assert alpha_eq(a, c)


@given(lambda_terms(), st.sampled_from("xyzwv"), st.sampled_from("abc"), lambda_terms(2))
def test_alpha_renaming_and_congruence(body, x, fresh, c):
    a = Abs(x, body)
    if fresh not in free_vars(body):
        b = Abs(fresh, substitute(body, x, Var(fresh)))
        assert alpha_eq(a, b)
        assert alpha_eq(App(a, c), App(b, c))


# -- redex discovery ----------------------------------------------------------


def test_no_sites_in_a_variable():
    assert contraction_sites(Var("x")) == []


def test_sites_of_the_running_example():
    sites = contraction_sites(M)
    kinds = {(s.position, s.kind) for s in sites}
    assert ((), BETA) in kinds
    eta = [s for s in sites if s.kind == ETA]
    assert len(eta) == 1
    assert subterm_at(M, eta[0].position) == parse_term(r"\w.z w")
    assert alpha_eq(eta[0].result, parse_term(r"(\x.(\y.y x) z) v"))
    root = next(s for s in sites if s.position == ())
    assert alpha_eq(root.result, parse_term(r"(\y.y v)(\w.z w)"))


def test_single_beta_site():
    sites = contraction_sites(parse_term(r"(\y.y v) z"))
    assert [(s.position, s.kind) for s in sites] == [((), BETA)]
    assert sites[0].result == parse_term("z v")


def test_sites_are_preorder_with_beta_before_eta():
    # the root is both a beta redex inside and an eta redex
    t = parse_term(r"\x.(\y.y) x")
    sites = contraction_sites(t)
    assert [(s.position, s.kind) for s in sites] == [((), ETA), ((0,), BETA)]
    t = parse_term(r"(\a.a)((\b.b) c)")
    assert [s.position for s in contraction_sites(t)] == [(), (1,)]


@given(lambda_terms())
def test_sites_change_only_their_position(t):
    for site in contraction_sites(t):
        assert alpha_eq(contract_at(t, site.position, site.kind), site.result)
        # everything off the redex's path is untouched
        for depth in range(len(site.position)):
            prefix = site.position[:depth]
            here, there = subterm_at(t, prefix), subterm_at(site.result, prefix)
            assert type(here) is type(there)


@given(lambda_terms())
def test_beta_sites_agree_with_substitution(t):
    for site in contraction_sites(t):
        if site.kind == BETA:
            redex = subterm_at(t, site.position)
            expected = substitute(redex.fun.body, redex.fun.binder, redex.arg)
            assert alpha_eq(subterm_at(site.result, site.position), expected)


# -- normalization ------------------------------------------------------------


def test_normal_term_is_returned_unchanged():
    t = parse_term("z v")
    assert normalize_term(t) == (t, [])


def test_running_example_normalizes_in_three_steps():
    nf, history = normalize_term(M)
    assert nf == parse_term("z v")
    assert [s.kind for s in history] == [ETA, BETA, BETA]
    assert [pretty(s.result) for s in history] == ["(λx.(λy.yx)z)v", "(λy.yv)z", "zv"]


def test_omega_exhausts_fuel():
    omega = parse_term(r"(\x.x x)(\x.x x)")
    with pytest.raises(FuelExhausted):
        normalize_term(omega, fuel=100)


def test_fuel_must_be_positive():
    with pytest.raises(ValueError):
        normalize_term(Var("x"), fuel=0)


@given(lambda_terms(3))
def test_normalization_is_deterministic(t):
    try:
        first = normalize_term(t, fuel=200)
    except FuelExhausted:
        return
    second = normalize_term(t, fuel=200)
    assert alpha_eq(first[0], second[0])
    assert contraction_sites(first[0]) == []


def test_pretty_matches_hand_notation():
    assert pretty(M) == "(λx.(λy.yx)(λw.zw))v"
    assert pretty(parse_term("f (g x)")) == "f(gx)"
    assert pretty(parse_term("foo bar")) == "foo bar"

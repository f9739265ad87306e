from __future__ import annotations

import pytest
from mutations import mutations

from idpaths import kernel
from idpaths.errors import EndpointMismatch, KernelError, RuleMismatch, UndischargedHypothesis
from idpaths.kernel import (
    Apply,
    Arrow,
    Base,
    Derivation,
    EmbeddedPath,
    IdT,
    IsType,
    Lam,
    PathJudg,
    PathWitness,
    Pi,
    Rewr,
    TermVar,
    Typing,
    axiom_derivation,
    builtin_constructions,
    check,
    count_rewr,
    instantiate,
    pretty,
    pretty_judgment,
    pt_eq,
    reduce_rewr,
    reduce_rewr_fully,
    subst,
    type_eq,
)
from idpaths.paths import Atom, Rho, RuleStep, Sigma, Tau
from idpaths.syntax import parse_judgment, parse_term
from idpaths.terms import Var

A = Base("A")
a, b, c = TermVar("a"), TermVar("b"), TermVar("c")
va, vb, vc = Var("a"), Var("b"), Var("c")
CTX = {"a": A, "b": A, "c": A}


def hyp(label, judgment):
    return Derivation("Hyp", judgment, label=label)


# -- built-in constructions ---------------------------------------------------


def test_refl_checks_with_its_printed_type():
    d = builtin_constructions()["refl"]
    assert pretty_judgment(check(d)) == "λa.ρ(a,a) : Π_(a:A)Id_A(a,a)"
    assert d.count("IdE1") == 0


def test_symm_checks_with_its_printed_type():
    j = check(builtin_constructions()["symm"])
    assert pretty(j.subject) == "λa.λb.λp.REWR(p, t́.(σ(t))(b,a))"
    assert kernel.pretty_type(j.type) == "Π_(a:A)Π_(b:A)(Id_A(a,b) → Id_A(b,a))"


def test_trans_checks_with_two_nested_eliminations():
    d = builtin_constructions()["trans"]
    j = check(d)
    assert kernel.pretty_type(j.type) == "Π_(a:A)Π_(b:A)Π_(c:A)(Id_A(a,b) → Id_A(b,c) → Id_A(a,c))"
    assert pretty(j.subject) == "λa.λb.λc.λw.λs.REWR(w, t́.REWR(s, u\u0301.(τ(t,u))(a,c)))"
    outer = next(n for n in d.nodes() if n.rule == "IdE1")
    assert outer.premises[1].rule == "IdE1"
    assert outer.premises[1].premises[1].premises[0].rule == "EqAxiom:tau"


def test_arrow_and_unused_pi_agree():
    assert type_eq(Arrow(A, A), Pi("x", A, A))
    assert not type_eq(Pi("x", A, IdT(A, TermVar("x"), TermVar("x"))), Arrow(A, IdT(A, TermVar("x"), TermVar("x"))))


# -- mutations ----------------------------------------------------------------


@pytest.mark.parametrize("name,derivation,error", mutations(), ids=[m[0] for m in mutations()])
def test_mutation_is_rejected(name, derivation, error):
    with pytest.raises(error):
        check(derivation)


def test_errors_are_located():
    name, broken, _ = mutations()[1]
    with pytest.raises(EndpointMismatch) as info:
        check(broken)
    assert "EqAxiom:sigma" in str(info.value)


# -- individual rules ---------------------------------------------------------


def test_identity_formation():
    concl = IsType(IdT(A, a, b))
    d = Derivation("IdF", concl, (hyp("a", Typing(a, A)), hyp("b", Typing(b, A))))
    assert check(d, CTX) == concl
    with pytest.raises(RuleMismatch, match="unbound"):
        check(d)
    wrong = Derivation("IdF", concl, (hyp("a", Typing(a, A)), hyp("c", Typing(c, A))))
    with pytest.raises(EndpointMismatch):
        check(wrong, CTX)


def test_pi_elimination_substitutes_the_argument():
    trans = builtin_constructions()["trans"]
    fun = trans.conclusion
    applied = Typing(Apply(fun.subject, a), kernel.subst_type(fun.type.codomain, "a", a))
    d = Derivation("PiE", applied, (trans, hyp("x", Typing(a, A))))
    assert check(d, CTX) == applied
    bad = Typing(applied.subject, kernel.subst_type(fun.type.codomain, "a", b))
    with pytest.raises(RuleMismatch):
        check(Derivation("PiE", bad, (trans, hyp("x", Typing(a, A)))), CTX)


def test_pi_introduction_discharges_only_its_binder():
    body = PathWitness(Rho(va), a, a)
    inner = Derivation("IdI1", Typing(body, IdT(A, a, a)), (Derivation("EqAxiom:rho", PathJudg(a, Rho(va), a, A)),))
    d = Derivation("PiI", Typing(Lam("a", body), Pi("a", A, IdT(A, a, a))), (inner,), {"b"})
    assert check(d)
    bad = Derivation("PiI", Typing(Lam("a", body), Pi("a", A, IdT(A, a, a))), (hyp_wrapped(inner),), {"b"})
    with pytest.raises(RuleMismatch, match="cannot discharge"):
        check(bad, CTX)


def hyp_wrapped(inner):
    # the same witness, now resting on an open path hypothesis that no abstraction may discharge
    return Derivation("IdI1", inner.conclusion, (hyp("b", inner.premises[0].conclusion),))


def test_eigenvariable_condition():
    t = Atom("t", va, vb)
    emb = EmbeddedPath(t)
    carrier = IdT(A, a, b)
    rho_node = Derivation("EqAxiom:rho", PathJudg(emb, Rho(t), emb, carrier))
    wit = PathWitness(Rho(t), emb, emb)
    minor = Derivation("IdI1", Typing(wit, IdT(carrier, emb, emb)), (rho_node,))
    major = hyp("m", Typing(TermVar("m"), carrier))
    concl = Typing(Rewr(TermVar("m"), "t", wit), IdT(carrier, emb, emb))
    d = Derivation("IdE1", concl, (major, minor), {"t"})
    with pytest.raises(RuleMismatch, match="escapes"):
        check(d, {**CTX, "m": carrier})


def test_path_introduction_and_elimination_one_level_up():
    r = Atom("r", va, vb)
    s_path, t_path = Sigma(Sigma(r)), r
    z = RuleStep("ss", s_path, t_path)
    carrier = IdT(A, a, b)
    r_hyp = hyp("r", PathJudg(a, r, b, A))
    s_node = axiom_derivation(a, s_path, b, A)
    z_node = Derivation("Rw", PathJudg(EmbeddedPath(s_path), z, EmbeddedPath(t_path), carrier))
    left, right = PathWitness(s_path, a, b), PathWitness(t_path, a, b)
    intro = Derivation("IdI2", PathJudg(left, z, right, carrier), (s_node, r_hyp, z_node))
    assert check(intro, CTX, assumptions=(r_hyp.conclusion,)) == intro.conclusion

    g = Atom("g", va, vb)
    h = PathWitness(Sigma(g), b, a)
    minor = Derivation("IdI1", Typing(h, IdT(A, b, a)), (axiom_derivation(b, Sigma(g), a, A),))
    concl = PathJudg(Rewr(left, "g", h), z, Rewr(right, "g", h), IdT(A, b, a))
    elim = Derivation("IdE2", concl, (intro, minor), {"g"})
    assert check(elim, CTX, assumptions=(r_hyp.conclusion,)) == concl
    with pytest.raises(UndischargedHypothesis):
        check(Derivation("IdE2", concl, (intro, minor)), CTX, assumptions=(r_hyp.conclusion,))


def test_rule_step_witnesses_must_follow_their_schema():
    r = Atom("r", va, vb)
    bogus = RuleStep("tt", Sigma(Sigma(r)), r)
    d = Derivation("Rw", PathJudg(EmbeddedPath(bogus.before), bogus, EmbeddedPath(r), IdT(A, a, b)))
    with pytest.raises(RuleMismatch):
        check(d, CTX)


def test_congruence_axioms():
    m = parse_term(r"(\x.x) b")
    step = kernel.paths.find_betaeta_path(m, vb)
    beta = Derivation("EqAxiom:beta", PathJudg(kernel.from_term(m), step, b, A))
    f = TermVar("f")
    fa = Apply(f, kernel.from_term(m))
    mu = kernel.paths.Mu(Var("f"), step)
    mu_node = Derivation("EqAxiom:mu", PathJudg(fa, mu, Apply(f, b), A), (beta, hyp("f", Typing(f, Arrow(A, A)))))
    assert check(mu_node, {"b": A, "f": Arrow(A, A)})
    nu = kernel.paths.Nu(step, Var("b"))
    with pytest.raises(RuleMismatch):
        check(Derivation("EqAxiom:nu", PathJudg(Apply(kernel.from_term(m), b), nu, Apply(b, b), A), (beta, beta)), CTX)


# -- reductions ---------------------------------------------------------------


def test_eta_reduction():
    e = TermVar("e")
    trivial = Rewr(e, "t", PathWitness(Atom("t", va, vb), a, b))
    assert reduce_rewr(trivial) == (e, "eta")


def test_beta_reduction_substitutes_the_major_path():
    m = Atom("m", va, vb)
    minor = PathWitness(Sigma(Atom("g", va, vb)), b, a)
    reduced, tag = reduce_rewr(Rewr(PathWitness(m, a, b), "g", minor))
    assert tag == "beta" and reduced == PathWitness(Sigma(m), b, a)


def test_no_redex():
    assert reduce_rewr(TermVar("x")) == (TermVar("x"), "none")


def _concrete_trans():
    p, q = Atom("p", va, vb), Atom("q", vb, vc)
    body = builtin_constructions()["trans"].conclusion.subject
    return p, q, instantiate(body, [a, b, c, PathWitness(p, a, b), PathWitness(q, b, c)])


def test_trans_reduces_in_two_beta_steps():
    p, q, term = _concrete_trans()
    result, tags = reduce_rewr_fully(term)
    assert tags == ["beta", "beta"]
    assert pt_eq(result, PathWitness(Tau(p, q), a, c))
    assert len(tags) <= count_rewr(term)


def test_subject_reduction_for_trans():
    p, q, term = _concrete_trans()
    carrier = IdT(A, a, c)
    p_j, q_j = PathJudg(a, p, b, A), PathJudg(b, q, c, A)
    t, u = Atom("t", va, vb), Atom("u", vb, vc)
    minor = Derivation("IdI1", Typing(PathWitness(Tau(t, u), a, c), carrier), (axiom_derivation(a, Tau(t, u), c, A),))
    inner = term.minor
    w_q = Derivation("IdI1", Typing(PathWitness(q, b, c), IdT(A, b, c)), (hyp("q", q_j),))
    w_p = Derivation("IdI1", Typing(PathWitness(p, a, b), IdT(A, a, b)), (hyp("p", p_j),))
    d_inner = Derivation("IdE1", Typing(inner, carrier), (w_q, minor), {"u"})
    before = Derivation("IdE1", Typing(term, carrier), (w_p, d_inner), {"t"})
    assert check(before, CTX, assumptions=(p_j, q_j))

    result, _ = reduce_rewr_fully(term)
    after = Derivation("IdI1", Typing(result, carrier), (axiom_derivation(a, result.path, c, A),))
    assert check(after, CTX, assumptions=(p_j, q_j))


def test_subject_reduction_for_eta():
    carrier = IdT(A, a, b)
    e = TermVar("e")
    t = Atom("t", va, vb)
    wit = PathWitness(t, a, b)
    minor = Derivation("IdI1", Typing(wit, carrier), (hyp("t", PathJudg(a, t, b, A)),))
    d = Derivation("IdE1", Typing(Rewr(e, "t", wit), carrier), (hyp("e", Typing(e, carrier)), minor), {"t"})
    ctx = {**CTX, "e": carrier}
    assert check(d, ctx)
    reduced, tag = reduce_rewr(d.conclusion.subject)
    assert tag == "eta"
    assert check(hyp("e", Typing(reduced, carrier)), ctx)


# -- alpha and substitution ---------------------------------------------------


def test_alpha_equivalence_of_proof_terms_and_types():
    assert pt_eq(Lam("x", TermVar("x")), Lam("y", TermVar("y")))
    assert not pt_eq(Lam("x", TermVar("x")), Lam("x", TermVar("z")))
    assert type_eq(Pi("x", A, IdT(A, TermVar("x"), a)), Pi("y", A, IdT(A, TermVar("y"), a)))


def test_substitution_avoids_capture():
    out = subst(Lam("y", TermVar("x")), "x", TermVar("y"))
    assert isinstance(out, Lam) and out.binder != "y" and out.body == TermVar("y")


def test_judgments_round_trip_through_text():
    for d in builtin_constructions().values():
        for node in d.nodes():
            assert parse_judgment(str(node.conclusion)) == node.conclusion


def test_kernel_errors_share_a_base():
    assert issubclass(RuleMismatch, KernelError) and issubclass(UndischargedHypothesis, KernelError)

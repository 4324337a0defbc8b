import time
from pathlib import Path

import pytest

from polartab import (
    PreprocessOptions, RewriteLimitExceeded, SearchConfig, Status, check_proof, load_problem,
    parse_formula, parse_problem, prove,
)
from polartab import trace as T
from polartab.parser import Declaration, Problem
from polartab.prover import delta_witness, expand, try_close
from polartab.syntax import Atom, Exists, NameSupply, Not
from polartab.terms import App, Meta, Var
from propositional import by_depth, tautology

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"


def F(text):
    return parse_formula(text)


# ---------------------------------------------------------------- expand

def test_expand_not_implies():
    assert expand(F("~(p => q)"), NameSupply()) == (T.ALPHA_NOT_IMPLIES, [(F("p"), F("~q"))])


def test_expand_or():
    assert expand(F("p | q"), NameSupply()) == (T.BETA_OR, [(F("p"),), (F("q"),)])


def test_expand_forall():
    s = NameSupply()
    label, [(inst,)] = expand(F("forall x. p(x)"), s)
    assert label == T.GAMMA_FORALL and inst == Atom("p", (Meta(1),))
    label, [(inst2,)] = expand(F("forall x. p(x)"), s)
    assert inst2 == Atom("p", (Meta(2),))


@pytest.mark.parametrize("text,label,parts", [
    ("p & q", T.ALPHA_AND, [("p", "q")]),
    ("~~p", T.ALPHA_NOT_NOT, [("p",)]),
    ("~(p | q)", T.ALPHA_NOT_OR, [("~p", "~q")]),
    ("p => q", T.BETA_IMPLIES, [("~p",), ("q",)]),
    ("~(p & q)", T.BETA_NOT_AND, [("~p",), ("~q",)]),
])
def test_expand_schemas(text, label, parts):
    assert expand(F(text), NameSupply()) == (label, [tuple(F(x) for x in seg) for seg in parts])


def test_expand_literal_is_none():
    assert expand(F("p(a)"), NameSupply()) is None
    assert expand(F("~p(a)"), NameSupply()) is None


def test_expand_not_exists():
    label, [(inst,)] = expand(F("~(exists x. p(x))"), NameSupply())
    assert label == T.GAMMA_NOT_EXISTS and inst == Not(Atom("p", (Meta(1),)))


# ----------------------------------------------------------------- delta

def test_delta_fresh_constant():
    s = NameSupply({"a", "in"})
    f = F("~(forall z. (z in a => z in a))")
    assert delta_witness(f, s) == App("c")
    label, [(body,)] = expand(f, s)
    assert label == T.DELTA_NOT_FORALL
    assert body == F("~(c_1 in a => c_1 in a)")  # the second witness is fresh


def test_delta_over_metas():
    q = Exists("y", Atom("P", (Meta(1), Var("y"), Meta(4), Meta(1))))
    w = delta_witness(q, NameSupply({"P"}))
    assert w == App("c", (Meta(1), Meta(4)))
    label, [(body,)] = expand(q, NameSupply({"P"}))
    assert body == Atom("P", (Meta(1), w, Meta(4), Meta(1)))


def test_delta_symbols_distinct():
    s = NameSupply()
    f = F("exists y. p(y)")
    assert delta_witness(f, s) != delta_witness(f, s)


# ------------------------------------------------------------- try_close

def test_close_ground():
    lits = [F("f(a, a) in a"), F("~(f(a, a) in a)")]
    assert next(try_close(lits)) == ({}, (0, 1))


def test_close_unifies():
    lits = [Atom("P", (Meta(1),)), F("~P(c)")]
    s, refs = next(try_close(lits))
    assert s == {1: App("c")} and refs == (0, 1)


def test_close_none():
    assert list(try_close([F("P(a)")])) == []
    assert list(try_close([F("P(a)"), F("~P(b)")])) == []


def test_close_contradictions():
    assert next(try_close([F("p"), F("false")]))[1] == (1,)
    assert next(try_close([F("~true")]))[1] == (0,)


def test_close_enumerates_alternatives():
    lits = [Atom("P", (Meta(1),)), F("~P(a)"), F("~P(b)")]
    options = [s for s, _ in try_close(lits)]
    assert {1: App("a")} in options and {1: App("b")} in options


# ------------------------------------------------------------ prove

def test_refl_polarized(refl):
    r = prove(refl)
    assert r.status is Status.PROVED
    assert r.trace.labels() == [T.PREMISE, T.REWRITE, T.ALPHA_NOT_IMPLIES, T.CLOSE]
    assert (r.trace.expansions(), r.trace.closures()) == (2, 1)


def test_refl_unpolarized(refl):
    r = prove(refl, options=PreprocessOptions(polarize=False))
    assert r.trace.labels() == [T.PREMISE, T.REWRITE, T.DELTA_NOT_FORALL, T.ALPHA_NOT_IMPLIES,
                                T.CLOSE]
    assert (r.trace.expansions(), r.trace.closures()) == (3, 1)
    assert r.trace.nodes[2].term == App("c")


def test_refl_plain_tableau(refl):
    r = prove(refl, options=PreprocessOptions(orient_axioms=False))
    assert r.trace.labels() == [
        T.PREMISE, T.GAMMA_FORALL, T.GAMMA_FORALL, T.ALPHA_AND, T.BETA_IMPLIES,
        T.DELTA_NOT_FORALL, T.ALPHA_NOT_IMPLIES, T.CLOSE, T.BETA_IMPLIES, T.CLOSE]


def test_countermodel_exhausts(problem):
    r = prove(problem("subset_distinct"))
    assert r.status is Status.EXHAUSTED and r.trace is None
    # a = {1}, b = {} satisfies the inclusion axiom and falsifies the goal
    sets = {"a": {1}, "b": set()}
    for x in sets.values():
        for y in sets.values():
            assert (x <= y) == all(z in y for z in x)
    assert not sets["a"] <= sets["b"]


def test_rewrite_loop_raises(problem):
    with pytest.raises(RewriteLimitExceeded) as info:
        prove(problem("rewrite_loop"), SearchConfig(rewrite_budget=100))
    assert info.value.literal is not None


def test_timeout():
    p = parse_problem("axiom a: forall x. (p(x) | q(f(x))).\ngoal g: exists y. (r(y) & s(y)).")
    r = prove(p, SearchConfig(max_gamma=50, timeout=0.2))
    assert r.status in (Status.TIMEOUT, Status.EXHAUSTED)
    assert r.stats.time < 5


def test_iterative_deepening_reports_limit(problem):
    r = prove(problem("subset_trans"))
    assert r.proved and r.stats.gamma_limit == 2
    assert prove(problem("subset_trans"), SearchConfig(max_gamma=1)).status is Status.EXHAUSTED


def test_config_must_be_positive():
    with pytest.raises(ValueError):
        SearchConfig(max_gamma=0)
    with pytest.raises(ValueError):
        SearchConfig(timeout=-1)


def test_scheduling_order():
    p = parse_problem(
        "axiom g1: forall x. p(x).\n"
        "axiom b1: q | r.\n"
        "axiom a1: s & t.\n"
        "axiom d1: exists y. u(y).\n"
        "axiom v1: v.\n"
        "rewrite+ rw: v -> w.\n"
        "goal g: p(a).")
    labels = prove(p).trace.labels()
    assert labels[:6] == [T.PREMISE, T.ALPHA_AND, T.DELTA_EXISTS, T.REWRITE, T.BETA_OR,
                          T.GAMMA_FORALL]


def test_skolem_uniformity(problem):
    r = prove(problem("subset_trans"))
    tr = r.trace
    neg_steps = [st for n in tr.nodes if n.rule == T.REWRITE for st in n.steps
                 if st.rule == "incl_neg"]
    assert len(neg_steps) == 1
    uses = set()
    for n in tr.nodes:
        for f in n.formulas:
            for t in _terms(f):
                if type(t) is App and t.symbol == "f":
                    uses.add(_resolve(t, tr.substitution))
    assert uses == {App("f", (App("a"), App("c")))}


def _terms(f):
    from polartab.syntax import children
    if isinstance(f, Atom):
        yield from f.args
    for k in children(f):
        yield from _terms(k)


def _resolve(t, s):
    from polartab import kernels
    return kernels.resolve(t, s)


@pytest.mark.parametrize("name", ["peirce", "drinker", "syllogism", "contraposition",
                                  "pelletier18", "declared_rules", "union_empty"])
def test_corpus_theorems(problem, name):
    p = problem(name)
    r = prove(p)
    assert r.proved
    assert check_proof(p, r.trace)


def test_propositional_completeness_small():
    t0 = time.perf_counter()
    cfg = SearchConfig(max_gamma=1)
    for f in by_depth(2)[::7]:
        r = prove(Problem("prop", [Declaration("goal", "g", formula=f)]), cfg)
        assert r.proved == tautology(f), f
    assert time.perf_counter() - t0 < 30


def test_deterministic(problem):
    from polartab import serialize_trace
    p = problem("union_least")
    assert serialize_trace(prove(p).trace) == serialize_trace(prove(p).trace)

import pytest
from hypothesis import given, strategies as st

from polartab import (
    ArityError, DuplicateName, NoGoal, ParseError, load_problem, parse_formula, parse_problem,
    parse_term, show,
)
from polartab.syntax import (
    And, Atom, Exists, Forall, Iff, Implies, Not, Or, BOTTOM, TOP,
)
from polartab.terms import App, Meta, Var

INCLUSION_PROBLEM = """\
axiom incl: forall x y. (x subset y <=> (forall z. (z in x => z in y))).
goal g: a subset a.
"""


def test_inclusion_problem():
    p = parse_problem(INCLUSION_PROBLEM)
    assert [(d.kind, d.name) for d in p.declarations] == [("axiom", "incl"), ("goal", "g")]
    assert p.goal.formula == Atom("subset", (App("a"), App("a")))
    assert isinstance(p.axioms[0].formula.body.body, Iff)


def test_problem_file_matches_text(refl):
    expected = parse_problem(INCLUSION_PROBLEM)
    assert [(d.kind, d.name, d.formula) for d in refl.declarations] == [
        (d.kind, d.name, d.formula) for d in expected.declarations]
    assert refl.name == "subset_refl"


@pytest.mark.parametrize("text", ["", "# only a comment\n", "axiom a: p."])
def test_no_goal(text):
    with pytest.raises(NoGoal):
        parse_problem(text)


def test_arity_error():
    with pytest.raises(ArityError):
        parse_problem("axiom a: p(a).\ngoal g: p(a, b).")
    with pytest.raises(ArityError):
        parse_problem("goal g: p(f(a)) & p(f(a, a)).")


def test_duplicate_name():
    with pytest.raises(DuplicateName) as info:
        parse_problem("axiom x: p.\ngoal x: p.")
    assert info.value.line == 2


def test_error_location():
    with pytest.raises(ParseError) as info:
        parse_problem("goal g: p(a) &\n  & q.")
    assert (info.value.line, info.value.column) == (2, 3)
    assert str(info.value).startswith("2:3:")


@pytest.mark.parametrize("text", [
    "goal g: p(a)",                 # missing final dot
    "lemma l: p.\ngoal g: p.",      # unknown declaration kind
    "goal g: forall . p.",
    "goal g: p(a,).",
    "goal a: p.\ngoal b: q.",
    "goal g: ?M1 in a.",
])
def test_malformed(text):
    with pytest.raises(ParseError):
        parse_problem(text)


def test_rule_declarations(problem):
    p = problem("declared_rules")
    kinds = [d.kind for d in p.declarations]
    assert kinds == ["rewrite+", "rewrite-", "axiom", "goal"]
    d = p.declarations[0]
    assert d.lhs == Atom("nonempty", (Var("S"),))
    assert isinstance(d.rhs, Exists)
    t = problem("union_empty").declarations[0]
    assert (t.kind, t.lhs, t.rhs) == ("rule_term", App("union", (Var("X"), App("empty"))), Var("X"))


def test_precedence():
    f = parse_formula("~p & q | r => s <=> t")
    p, q, r, s, t = (Atom(c) for c in "pqrst")
    assert f == Iff(Implies(Or(And(Not(p), q), r), s), t)
    assert parse_formula("p => q => r") == Implies(p, Implies(q, r))
    assert parse_formula("forall x. p(x) & q") == Forall("x", And(Atom("p", (Var("x"),)), q))
    assert parse_formula("true | false") == Or(TOP, BOTTOM)


def test_metavariables_parse():
    assert parse_term("f(?M3)") == App("f", (Meta(3),))


def test_free_names_are_constants():
    p = parse_problem("axiom a: p(x).\ngoal g: p(X).")
    assert p.axioms[0].formula == Atom("p", (App("x"),))
    assert p.goal.formula == Atom("p", (App("X"),))


# --------------------------------------------------------- print/parse

names = st.sampled_from(["a", "b", "c"])


def terms(bound):
    leaves = [st.builds(App, names)]
    if bound:
        leaves.append(st.sampled_from([Var(v) for v in bound]))
    return st.recursive(
        st.one_of(leaves),
        lambda sub: st.builds(lambda s, xs: App(s, xs), st.sampled_from(["f", "g"]),
                              st.lists(sub, min_size=1, max_size=2).map(tuple)),
        max_leaves=4,
    )


def formulas(bound=()):
    atom = st.one_of(
        st.builds(lambda x: Atom("p", (x,)), terms(bound)),
        st.builds(lambda x, y: Atom("in", (x, y)), terms(bound), terms(bound)),
        st.builds(lambda x, y: Atom("subset", (x, y)), terms(bound), terms(bound)),
        st.just(Atom("q")), st.just(TOP), st.just(BOTTOM),
    )
    if len(bound) >= 2:
        return atom
    var = f"v{len(bound)}"
    return st.recursive(
        atom,
        lambda sub: st.one_of(
            st.builds(Not, sub),
            *(st.builds(c, sub, sub) for c in (And, Or, Implies, Iff)),
            st.builds(lambda b: Forall(var, b), formulas(bound + (var,))),
            st.builds(lambda b: Exists(var, b), formulas(bound + (var,))),
        ),
        max_leaves=6,
    )


@given(formulas())
def test_print_parse_round_trip(f):
    assert parse_formula(show(f)) == f


@given(terms(()))
def test_term_round_trip(t):
    assert parse_term(show(t)) == t


def test_every_corpus_file_parses(problem):
    from pathlib import Path
    root = Path(__file__).resolve().parent.parent / "problems"
    for path in root.glob("*.p"):
        p = load_problem(path)
        assert p.goal is not None
        for d in p.declarations:
            if d.formula is not None:
                assert parse_formula(show(d.formula)) == d.formula

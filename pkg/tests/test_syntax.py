import pytest
from hypothesis import given, strategies as st

from polartab import parse_formula, parse_problem
from polartab.syntax import (
    And, Atom, Exists, Forall, Iff, Implies, InvalidPosition, NameSupply, Not, Or,
    Polarity, TOP, apply_subst, children, desugar, free_vars, polarity_of,
    replace_at, subformula_at,
)
from polartab.terms import App, Var, const

POS, NEG = Polarity.POSITIVE, Polarity.NEGATIVE
A, B, C = Atom("A"), Atom("B"), Atom("C")


def flips(g, path):
    """Independent oracle: count negations and implication antecedents."""
    n, f = 0, g
    for i in path:
        if type(f) is Not or (type(f) is Implies and i == 0):
            n += 1
        f = children(f)[i]
    return POS if n % 2 == 0 else NEG


def positions(g, prefix=()):
    yield prefix
    for i, k in enumerate(children(g)):
        yield from positions(k, prefix + (i,))


atoms = st.sampled_from([A, B, C, TOP])
formulas = st.recursive(
    atoms,
    lambda sub: st.one_of(
        st.builds(Not, sub),
        st.builds(And, sub, sub), st.builds(Or, sub, sub), st.builds(Implies, sub, sub),
        st.builds(Forall, st.just("x"), sub), st.builds(Exists, st.just("x"), sub),
    ),
    max_leaves=10,
)


def test_root_is_positive():
    assert polarity_of(A, ()) is POS


def test_negated_inclusion_is_negative():
    g = parse_formula("~(a subset a)")
    assert subformula_at(g, (0,)) == Atom("subset", (const("a"), const("a")))
    assert polarity_of(g, (0,)) is NEG


def test_double_antecedent_is_positive():
    g = Implies(Implies(A, B), C)
    assert subformula_at(g, (0, 0)) == A
    assert polarity_of(g, (0, 0)) is POS
    assert polarity_of(g, (0, 1)) is NEG
    assert polarity_of(g, (1,)) is POS


def test_invalid_positions():
    g = Implies(A, B)
    with pytest.raises(InvalidPosition):
        polarity_of(g, (2,))
    with pytest.raises(InvalidPosition):
        polarity_of(g, (0, 0))  # would address a term inside the atom
    with pytest.raises(InvalidPosition):
        polarity_of(Iff(A, B), (0,))


@given(formulas)
def test_polarity_matches_flip_counter(g):
    for p in positions(g):
        assert polarity_of(g, p) is flips(g, p)


@given(formulas)
def test_polarity_laws(g):
    for p in positions(g):
        pol = polarity_of(g, p)
        assert polarity_of(Not(g), (0,) + p) is pol.flip()
        assert polarity_of(Implies(g, A), (0,) + p) is pol.flip()
        assert polarity_of(Implies(A, g), (1,) + p) is pol
        for wrap in (And(g, A), Or(g, A)):
            assert polarity_of(wrap, (0,) + p) is pol
        for q in (Forall("y", g), Exists("y", g)):
            assert polarity_of(q, (0,) + p) is pol


def test_polarity_flip_is_involution():
    assert POS.flip() is NEG and NEG.flip() is POS
    assert {p.flip().flip() for p in Polarity} == set(Polarity)
    assert len(Polarity) == 2


def test_replace_at_round_trip():
    g = Implies(Implies(A, B), C)
    assert replace_at(g, (0, 1), C) == Implies(Implies(A, C), C)
    assert replace_at(g, (), A) == A


# ----------------------------------------------------------- substitution

def test_instantiate_inclusion():
    x, y, a = Var("x"), Var("y"), const("a")
    f = Atom("subset", (x, y))
    assert apply_subst(f, {x: a, y: a}) == Atom("subset", (a, a))


def test_empty_substitution_is_identity():
    f = parse_formula("forall x. (x in a => p(x))")
    assert apply_subst(f, {}) is f
    t = App("f", (const("a"),))
    assert apply_subst(t, {}) is t


def test_capture_avoidance():
    z, x = Var("z"), Var("x")
    f = Forall("z", Atom("P", (z, x)))
    out = apply_subst(f, {x: App("f", (z,))})
    assert isinstance(out, Forall) and out.var != "z"
    assert out.body == Atom("P", (Var(out.var), App("f", (z,))))
    assert free_vars(f) == {"x"}
    assert free_vars(out) == {"z"}


def test_substitution_is_simultaneous():
    x, y = Var("x"), Var("y")
    out = apply_subst(Atom("p", (x, y)), {x: y, y: x})
    assert out == Atom("p", (y, x))


def skeleton(f):
    kids = children(f)
    return (type(f).__name__, tuple(skeleton(k) for k in kids))


@given(formulas, st.sampled_from([const("a"), App("g", (Var("x"),)), Var("w")]))
def test_substitution_preserves_shape(f, t):
    f = Forall("x", And(f, Atom("p", (Var("y"),))))
    assert skeleton(apply_subst(f, {"y": t})) == skeleton(f)


# ----------------------------------------------------------------- desugar

def no_iff(f):
    return not isinstance(f, Iff) and all(no_iff(k) for k in children(f))


def test_desugar_iff():
    assert desugar(Iff(A, B)) == And(Implies(A, B), Implies(B, A))


def test_desugar_inclusion_axiom():
    f = parse_formula("forall x y. (x subset y <=> (forall z. (z in x => z in y)))")
    d = desugar(f)
    body = d.body.body
    assert isinstance(body, And)
    assert body.left.left == body.right.right
    assert body.left.right == body.right.left
    assert no_iff(d)


@given(formulas)
def test_desugar_without_iff_is_identity(f):
    assert desugar(f) == f


def test_desugar_nested():
    f = Not(Iff(Iff(A, B), Forall("x", Iff(C, A))))
    assert no_iff(desugar(f))


# ------------------------------------------------------- names and fresh

def test_free_vars():
    x, y, z = Var("x"), Var("y"), Var("z")
    assert free_vars(Atom("subset", (x, y))) == {"x", "y"}
    rhs = Forall("z", Implies(Atom("in", (z, x)), Atom("in", (z, y))))
    assert free_vars(rhs) == {"x", "y"}
    assert free_vars(App("f", (x, const("a")))) == {"x"}


def test_fresh_symbol_is_distinct():
    s = NameSupply({"a", "f"})
    names = [s.fresh_symbol("f") for _ in range(5)]
    assert len(set(names)) == 5
    assert "f" not in names and "a" not in names
    assert s.fresh_symbol("c") == "c"


def test_fresh_meta_ids_increase():
    s = NameSupply()
    ids = [s.fresh_meta().id for _ in range(4)]
    assert ids == sorted(set(ids))


def test_parser_renames_bound_apart():
    f = parse_problem("goal g: (forall x. p(x)) & (forall x. q(x)).").goal.formula
    binders = [g.var for g in _walk(f) if isinstance(g, Forall)]
    assert len(binders) == len(set(binders))


def _walk(f):
    yield f
    for k in children(f):
        yield from _walk(k)


def test_flip_oracle_agrees_on_all_short_paths():
    g = Not(Implies(Not(Implies(A, B)), Or(C, Not(A))))
    for p in positions(g):
        assert polarity_of(g, p) is flips(g, p)
    assert polarity_of(g, (0, 0, 0, 0)) is POS
    assert polarity_of(g, (0, 1, 1, 0)) is POS

"""Turning axioms into polarized rewrite rules and Skolemizing rules."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import IllFormedRule
from .parser import Problem
from .rewrite import PropRule, RuleKind, RuleSet, TermRule
from .syntax import (
    And, Atom, Exists, Forall, Implies, NameSupply, Not, Or, Polarity,
    children, desugar, free_vars, subst_formula,
)
from .terms import App, Var


@dataclass(frozen=True)
class PreprocessOptions:
    polarize: bool = True
    skolemize: bool = True
    orient_axioms: bool = True


@dataclass
class Preprocessed:
    rules: RuleSet
    residual: list            # [(name, formula)] kept as tableau premises
    negated_goal: object
    origins: dict = field(default_factory=dict)   # rule name -> declaration name
    supply: NameSupply = None
    options: PreprocessOptions = PreprocessOptions()

    def premises(self):
        return [f for _, f in self.residual] + [self.negated_goal]


def _strip_forall(f):
    names = []
    while isinstance(f, Forall):
        names.append(f.var)
        f = f.body
    return names, f


def _lhs_vars(atom):
    out = []

    def go(t):
        if type(t) is Var:
            out.append(t.name)
        elif type(t) is App:
            for a in t.args:
                go(a)

    for a in atom.args:
        go(a)
    return list(dict.fromkeys(out))


def _close(quant, names, body):
    for n in reversed(names):
        if n in free_vars(body):
            body = quant(n, body)
    return body


def _bound_names(f):
    out = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, (Forall, Exists)):
            out.add(g.var)
        stack.extend(children(g))
    return out


def _to_rule_vars(lhs, rhs):
    """Rename prefix variables to the upper-case rule-variable convention."""
    names = _lhs_vars(lhs)
    taken = _bound_names(rhs) | set(names)
    ren = {}
    for n in names:
        cand = n[0].upper() + n[1:]
        while cand != n and cand in taken:
            cand += "_"
        taken.add(cand)
        ren[n] = Var(cand)
    return subst_formula(lhs, ren), subst_formula(rhs, ren)


def classify_axiom(f, name="axiom"):
    """Rules represented by a closed, desugared axiom, plus a leftover flag.

    Returns ``(rules, leftover)``; rules are unskolemized. Universally
    quantified variables that do not occur in the rule's left-hand side are
    pushed into the right-hand side (as a universal for R+, an existential
    for R-), which keeps the rule equivalent to the axiom.
    """
    prefix, body = _strip_forall(f)

    def extra(p):
        return [n for n in prefix if n not in free_vars(p)]

    def make(lhs, rhs, kind, rname=name):
        quant = Forall if kind is RuleKind.POSITIVE else Exists
        rhs = _close(quant, extra(lhs), rhs)
        return PropRule(rname, lhs, rhs, kind, origin=name)

    if isinstance(body, And) and isinstance(body.left, Implies) and isinstance(body.right, Implies):
        (p, a), (a2, p2) = (body.left.left, body.left.right), (body.right.left, body.right.right)
        if p == p2 and a == a2:
            if not isinstance(p, Atom) and isinstance(a, Atom):
                p, a = a, p
            if isinstance(p, Atom):
                if not extra(p):
                    return [PropRule(name, p, a, RuleKind.BOTH, origin=name)], False
                return [make(p, a, RuleKind.POSITIVE, f"{name}_pos"),
                        make(p, a, RuleKind.NEGATIVE, f"{name}_neg")], False
    if isinstance(body, Implies):
        left, right = body.left, body.right
        if isinstance(left, Atom):
            return [make(left, right, RuleKind.POSITIVE)], False
        if isinstance(right, Atom):
            return [make(right, left, RuleKind.NEGATIVE)], False
        if isinstance(left, Not) and isinstance(left.body, Atom):
            return [make(left.body, Not(right), RuleKind.NEGATIVE)], False
        if isinstance(right, Not) and isinstance(right.body, Atom):
            return [make(right.body, Not(left), RuleKind.POSITIVE)], False
    return [], True


def _skolemize(rhs, kind, lhs_args, supply):
    replace_forall_at = Polarity.NEGATIVE if kind is RuleKind.POSITIVE else Polarity.POSITIVE

    def go(f, pol, scope, env):
        if isinstance(f, Atom):
            return subst_formula(f, env) if env else f
        if isinstance(f, Not):
            return Not(go(f.body, pol.flip(), scope, env))
        if isinstance(f, Implies):
            return Implies(go(f.left, pol.flip(), scope, env), go(f.right, pol, scope, env))
        if isinstance(f, (And, Or)):
            return type(f)(go(f.left, pol, scope, env), go(f.right, pol, scope, env))
        if isinstance(f, (Forall, Exists)):
            drop = (isinstance(f, Forall) and pol is replace_forall_at) or (
                isinstance(f, Exists) and pol is not replace_forall_at)
            if drop:
                sym = supply.fresh_symbol("f")
                witness = App(sym, [Var(n) for n in lhs_args + scope])
                return go(f.body, pol, scope, {**env, f.var: witness})
            inner = {k: v for k, v in env.items() if k != f.var}
            return type(f)(f.var, go(f.body, pol, scope + [f.var], inner))
        return f

    return go(rhs, Polarity.POSITIVE, [], {})


def skolemize_rule(rule, supply):
    """Skolemize the right-hand side of a propositional rule.

    For R+ rules positive existentials and negative universals are replaced,
    for R- rules positive universals and negative existentials. Skolem
    arguments are the left-hand-side variables followed by the variables of
    enclosing quantifiers that survive. A ``BOTH`` rule is first split into
    ``NAME_pos`` and ``NAME_neg``. Returns a list of rules.
    """
    if rule.polarity is RuleKind.BOTH:
        out = []
        for kind, suffix in ((RuleKind.POSITIVE, "pos"), (RuleKind.NEGATIVE, "neg")):
            part = PropRule(f"{rule.name}_{suffix}", rule.lhs, rule.rhs, kind, origin=rule.origin)
            out.extend(skolemize_rule(part, supply))
        return out
    rhs = _skolemize(rule.rhs, rule.polarity, _lhs_vars(rule.lhs), supply)
    return [PropRule(rule.name, rule.lhs, rhs, rule.polarity, True, rule.origin)]


def _edges(rule):
    p = rule.lhs.pred
    kinds = [RuleKind.POSITIVE, RuleKind.NEGATIVE] if rule.polarity is RuleKind.BOTH else [rule.polarity]
    out = []
    for k in kinds:
        rhs = rule.rhs
        if isinstance(rhs, Atom):
            out.append(((p, k), (rhs.pred, k)))
        elif isinstance(rhs, Not) and isinstance(rhs.body, Atom) and k is RuleKind.POSITIVE:
            out.append(((p, k), (rhs.body.pred, RuleKind.NEGATIVE)))
    return out


def _creates_cycle(graph, new_edges):
    g = {k: set(v) for k, v in graph.items()}
    for a, b in new_edges:
        g.setdefault(a, set()).add(b)
    for a, _ in new_edges:
        stack, seen = list(g.get(a, ())), set()
        while stack:
            n = stack.pop()
            if n == a:
                return True
            if n not in seen:
                seen.add(n)
                stack.extend(g.get(n, ()))
    return False


def _universal_closure(f, names):
    for n in reversed(names):
        f = Forall(n, f)
    return f


def preprocess_problem(problem: Problem, options=PreprocessOptions()) -> Preprocessed:
    """Rule set, residual premises and negated goal for a parsed problem."""
    funcs, preds = problem.signature()
    supply = NameSupply(set(funcs) | set(preds))
    term_rules, prop_rules, residual, origins = [], [], [], {}
    graph = {}

    def emit(rule):
        rules = [rule]
        if options.polarize and options.skolemize and isinstance(rule, PropRule):
            rules = skolemize_rule(rule, supply)
        for r in rules:
            origins[r.name] = rule.origin
            (term_rules if isinstance(r, TermRule) else prop_rules).append(r)

    for d in problem.declarations:
        if d.kind == "rule_term":
            emit(TermRule(d.name, d.lhs, d.rhs, origin=d.name))
        elif d.kind.startswith("rewrite"):
            if not isinstance(d.lhs, Atom):
                raise IllFormedRule(f"rule {d.name}: left-hand side must be atomic")
            kind = {"rewrite": RuleKind.BOTH, "rewrite+": RuleKind.POSITIVE,
                    "rewrite-": RuleKind.NEGATIVE}[d.kind]
            rhs = desugar(d.rhs)
            if not options.polarize and kind is not RuleKind.BOTH:
                lhs_free = sorted(free_vars(d.lhs))
                body = Implies(d.lhs, rhs) if kind is RuleKind.POSITIVE else Implies(rhs, d.lhs)
                residual.append((d.name, _universal_closure(body, lhs_free)))
                continue
            emit(PropRule(d.name, d.lhs, rhs, kind, origin=d.name))
        elif d.kind == "axiom":
            f = desugar(d.formula)
            rules, leftover = classify_axiom(f, d.name) if options.orient_axioms else ([], True)
            if not options.polarize and any(r.polarity is not RuleKind.BOTH for r in rules):
                rules, leftover = [], True
            edges = [e for r in rules for e in _edges(r)]
            if rules and _creates_cycle(graph, edges):
                rules, leftover = [], True
            if leftover:
                residual.append((d.name, f))
                continue
            for a, b in edges:
                graph.setdefault(a, set()).add(b)
            for r in rules:
                lhs, rhs = _to_rule_vars(r.lhs, r.rhs)
                emit(PropRule(r.name, lhs, rhs, r.polarity, origin=r.origin))
    rules = RuleSet.build(term_rules, prop_rules)
    goal = problem.goal
    return Preprocessed(rules, residual, Not(desugar(goal.formula)), origins, supply, options)

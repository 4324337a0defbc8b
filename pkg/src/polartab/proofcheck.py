"""Independent checking of proof traces.

The checker trusts only the problem: it re-derives the rule set and the
premises itself and replays every recorded step against the tableau rule
schemas. It shares the syntax and rewrite-step machinery with the prover but
none of the search code.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from . import kernels
from .errors import MalformedTrace, ReconstructionFailed
from .parser import Problem
from .preprocess import PreprocessOptions, preprocess_problem
from .rewrite import DEFAULT_BUDGET, all_steps, check_rewrite_step
from .syntax import (
    And, Atom, Bottom, Exists, Forall, Implies, Not, Or, Polarity, Top,
    free_vars, metas_of, resolve_formula, subst_formula,
)
from .terms import App, Meta
from . import trace as T


@dataclass(frozen=True)
class Verdict:
    valid: bool
    node: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.valid

    def __str__(self):
        if self.valid:
            return "valid"
        return f"invalid at node {self.node}: {self.reason}"


VALID = Verdict(True)


class _Invalid(Exception):
    def __init__(self, node, reason):
        self.node = node
        self.reason = reason


def _options(trace):
    o = trace.options or {}
    return PreprocessOptions(
        polarize=bool(o.get("polarize", True)),
        skolemize=bool(o.get("skolemize", True)),
        orient_axioms=bool(o.get("orient_axioms", True)),
    )


def _acyclic(subst):
    state = {}

    def visit(mid):
        if state.get(mid) == 1:
            return False
        if state.get(mid) == 2:
            return True
        state[mid] = 1
        for m in metas_of(subst[mid]):
            if m in subst and not visit(m):
                return False
        state[mid] = 2
        return True

    return all(visit(m) for m in subst)


def _alpha_schema(label, f):
    if label == T.ALPHA_AND and isinstance(f, And):
        return (f.left, f.right)
    if isinstance(f, Not):
        g = f.body
        if label == T.ALPHA_NOT_NOT and isinstance(g, Not):
            return (g.body,)
        if label == T.ALPHA_NOT_OR and isinstance(g, Or):
            return (Not(g.left), Not(g.right))
        if label == T.ALPHA_NOT_IMPLIES and isinstance(g, Implies):
            return (g.left, Not(g.right))
    return None


def _beta_schema(label, f):
    if label == T.BETA_OR and isinstance(f, Or):
        return (f.left,), (f.right,)
    if label == T.BETA_IMPLIES and isinstance(f, Implies):
        return (Not(f.left),), (f.right,)
    if label == T.BETA_NOT_AND and isinstance(f, Not) and isinstance(f.body, And):
        return (Not(f.body.left),), (Not(f.body.right),)
    return None


class _Checker:
    def __init__(self, problem, trace):
        self.trace = trace
        self.pre = preprocess_problem(problem, _options(trace))
        self.rules = self.pre.rules
        self.nodes = trace.nodes
        self.subst = trace.substitution
        self.reserved = set(self.pre.supply.used)
        self.delta_symbols = set()

    def fail(self, node, reason):
        raise _Invalid(node.id if node is not None else None, reason)

    def formula(self, node, ref, path):
        nid, idx = ref
        if nid not in path:
            self.fail(node, f"reference {list(ref)} is not on the branch")
        forms = self.nodes[nid].formulas
        if not 0 <= idx < len(forms):
            self.fail(node, f"reference {list(ref)} has no formula {idx}")
        return forms[idx]

    def resolved(self, f):
        return resolve_formula(f, self.subst)

    def run(self):
        nodes = self.nodes
        if not nodes:
            raise MalformedTrace("trace has no nodes")
        for i, n in enumerate(nodes):
            if n.id != i:
                raise MalformedTrace(f"node {i} carries id {n.id}")
            if i == 0:
                if n.parent is not None:
                    raise MalformedTrace("root node has a parent")
            elif n.parent is None or not 0 <= n.parent < i:
                raise MalformedTrace(f"node {i}: parent must be an earlier node")
        for mid, val in self.subst.items():
            if free_vars(val):
                self.fail(None, f"substitution for ?M{mid} has free variables")
        if not _acyclic(self.subst):
            self.fail(None, "global substitution is cyclic")

        root = nodes[0]
        if root.rule != T.PREMISE:
            self.fail(root, "root is not a premise node")
        if tuple(root.formulas) != tuple(self.pre.premises()):
            self.fail(root, "premises differ from residual axioms plus negated goal")

        kids = {n.id: [] for n in nodes}
        for n in nodes[1:]:
            kids[n.parent].append(n)

        gamma_metas = set()
        stack = [(root, frozenset([0]))]
        while stack:
            node, path = stack.pop()
            children = kids[node.id]
            if node.rule in T.CLOSURES:
                if children:
                    self.fail(node, "closure node has children")
                continue
            if node.rule == T.PREMISE and node.id != 0:
                self.fail(node, "premise below the root")
            if not children:
                self.fail(node, "open leaf")
            if any(c.rule in T.BETAS for c in children):
                self.check_beta(node, children, path)
            elif len(children) != 1:
                self.fail(node, f"{len(children)} children for a non-branching step")
            else:
                c = children[0]
                if c.rule in T.CLOSURES:
                    self.check_closure(c, path)
                else:
                    self.check_linear(c, path, gamma_metas)
            for c in children:
                stack.append((c, path | {c.id}))
        return VALID

    def check_beta(self, parent, children, path):
        if len(children) != 2:
            self.fail(children[0], "beta step needs exactly two branches")
        left, right = children
        if left.rule != right.rule or left.source != right.source or left.rule not in T.BETAS:
            self.fail(right, "beta branches disagree on rule or source")
        if left.source is None:
            self.fail(left, "beta step without a source")
        f = self.formula(left, left.source, path)
        schema = _beta_schema(left.rule, f)
        if schema is None:
            self.fail(left, f"{left.rule} does not apply to the source formula")
        if (tuple(left.formulas), tuple(right.formulas)) != schema:
            self.fail(left, f"{left.rule} branches do not match the rule")

    def check_closure(self, node, path):
        if node.formulas:
            self.fail(node, "closure node carries formulas")
        if node.rule == T.CLOSE:
            if len(node.closes) != 2:
                self.fail(node, "closure needs two formulas")
            a, b = (self.resolved(self.formula(node, r, path)) for r in node.closes)
            if not ((isinstance(b, Not) and b.body == a and isinstance(a, Atom))
                    or (isinstance(a, Not) and a.body == b and isinstance(b, Atom))):
                self.fail(node, "not complementary")
            return
        if len(node.closes) != 1:
            self.fail(node, f"{node.rule} needs one formula")
        f = self.formula(node, node.closes[0], path)
        if node.rule == T.CLOSE_BOTTOM and not isinstance(f, Bottom):
            self.fail(node, "not false")
        if node.rule == T.CLOSE_NOT_TOP and not (isinstance(f, Not) and isinstance(f.body, Top)):
            self.fail(node, "not ~true")

    def check_linear(self, node, path, gamma_metas):
        if node.rule == T.PREMISE or node.rule in T.BETAS:
            self.fail(node, f"misplaced {node.rule} node")
        if node.source is None:
            self.fail(node, "missing source reference")
        f = self.formula(node, node.source, path)
        forms = tuple(node.formulas)
        if node.rule in T.ALPHAS:
            schema = _alpha_schema(node.rule, f)
            if schema is None:
                self.fail(node, f"{node.rule} does not apply to the source formula")
            if forms != schema:
                self.fail(node, f"{node.rule} result does not match the rule")
        elif node.rule in T.DELTAS:
            self.check_delta(node, f, forms)
        elif node.rule in T.GAMMAS:
            self.check_gamma(node, f, forms, gamma_metas)
        elif node.rule == T.REWRITE:
            self.check_rewrite(node, f, forms)
        else:
            self.fail(node, f"unexpected rule {node.rule}")

    def check_delta(self, node, f, forms):
        if node.rule == T.DELTA_EXISTS and isinstance(f, Exists):
            q, wrap = f, (lambda g: g)
        elif node.rule == T.DELTA_NOT_FORALL and isinstance(f, Not) and isinstance(f.body, Forall):
            q, wrap = f.body, Not
        else:
            self.fail(node, f"{node.rule} does not apply to the source formula")
        w = node.term
        if type(w) is not App:
            self.fail(node, "witness is not a Skolem term")
        if w.symbol in self.reserved or w.symbol in self.delta_symbols:
            self.fail(node, f"witness symbol {w.symbol} is not fresh")
        if list(w.args) != [Meta(m) for m in metas_of(f)]:
            self.fail(node, "witness arguments differ from the free metavariables")
        self.delta_symbols.add(w.symbol)
        if forms != (wrap(subst_formula(q.body, {q.var: w})),):
            self.fail(node, f"{node.rule} result does not match the witness")

    def check_gamma(self, node, f, forms, gamma_metas):
        if node.rule == T.GAMMA_FORALL and isinstance(f, Forall):
            q, wrap = f, (lambda g: g)
        elif node.rule == T.GAMMA_NOT_EXISTS and isinstance(f, Not) and isinstance(f.body, Exists):
            q, wrap = f.body, Not
        else:
            self.fail(node, f"{node.rule} does not apply to the source formula")
        t = node.term
        if t is None or free_vars(t):
            self.fail(node, "instance term missing or not closed")
        if type(t) is Meta:
            if t.id in gamma_metas:
                self.fail(node, f"metavariable ?M{t.id} reused")
            gamma_metas.add(t.id)
        if forms != (wrap(subst_formula(q.body, {q.var: t})),):
            self.fail(node, f"{node.rule} result does not match the instance")

    def check_rewrite(self, node, f, forms):
        if len(forms) != 1:
            self.fail(node, "rewrite node must hold one formula")
        if node.steps is None:
            self.fail(node, "rewrite details elided")
        cur = f
        for k, st in enumerate(node.steps):
            why = check_rewrite_step(cur, Polarity.POSITIVE, st.rule, st.position,
                                     st.term_position, st.subst, st.result, self.rules)
            if why is not None:
                self.fail(node, f"rewrite step {k}: {why}")
            cur = st.result
        if cur != forms[0]:
            self.fail(node, "rewrite steps do not reach the recorded formula")


def check_proof(problem: Problem, trace: T.ProofTrace, reconstruct=False,
                budget=DEFAULT_BUDGET) -> Verdict:
    """Validate ``trace`` as a refutation of ``problem``.

    With ``reconstruct``, rewrite nodes whose step details were elided are
    first rebuilt by search. A step citing a rule the problem does not
    produce raises ``UnknownRule``; structural damage raises ``MalformedTrace``.
    """
    if reconstruct:
        try:
            trace = reconstruct_rewrites(problem, trace, budget)
        except ReconstructionFailed as e:
            return Verdict(False, getattr(e, "node", None), str(e))
    try:
        return _Checker(problem, trace).run()
    except _Invalid as e:
        return Verdict(False, e.node, e.reason)


def find_rewrite_path(source, target, rules, budget=DEFAULT_BUDGET):
    """Shortest sequence of polarized steps from ``source`` to ``target``.

    Breadth-first over single steps anywhere in the formula, visiting at most
    ``budget`` formulas.
    """
    if source == target:
        return []
    parent = {source: None}
    queue = deque([source])
    while queue:
        f = queue.popleft()
        for st in all_steps(f, rules, Polarity.POSITIVE):
            g = st.result
            if g in parent:
                continue
            parent[g] = (f, st)
            if g == target:
                path = []
                while parent[g] is not None:
                    g, step = parent[g]
                    path.append(step)
                return path[::-1]
            if len(parent) > budget:
                raise ReconstructionFailed(f"no rewrite path within {budget} formulas")
            queue.append(g)
    raise ReconstructionFailed("target is unreachable by polarized rewriting")


def reconstruct_rewrites(problem, trace, budget=DEFAULT_BUDGET):
    """Copy of ``trace`` with elided rewrite steps recovered by search."""
    pre = preprocess_problem(problem, _options(trace))
    nodes = []
    for n in trace.nodes:
        if n.rule == T.REWRITE and n.steps is None:
            if n.source is None or not 0 <= n.source[0] < len(trace.nodes):
                raise MalformedTrace(f"node {n.id}: bad source")
            src_node = trace.nodes[n.source[0]]
            if not 0 <= n.source[1] < len(src_node.formulas) or len(n.formulas) != 1:
                raise MalformedTrace(f"node {n.id}: bad source or result")
            try:
                path = find_rewrite_path(src_node.formulas[n.source[1]], n.formulas[0],
                                         pre.rules, budget)
            except ReconstructionFailed as e:
                e.node = n.id
                raise
            n = T.TraceNode(n.id, n.parent, n.rule, n.formulas, n.source, n.term,
                            n.closes, tuple(path))
        nodes.append(n)
    return T.ProofTrace(trace.problem, nodes, dict(trace.substitution), dict(trace.options))

"""Free-variable tableau search with polarized rewriting of literals.

The search is depth-first over a single tableau with rigid metavariables
and one global substitution. Branches are solved left to right; generators
give backtracking over the choice of closing pair, and iterative deepening
bounds the number of gamma applications per branch.
"""

from __future__ import annotations

import enum
import itertools
import time
from dataclasses import dataclass, field

from . import kernels
from .parser import Problem
from .preprocess import Preprocessed, PreprocessOptions, preprocess_problem
from .rewrite import DEFAULT_BUDGET, normalize_literal
from .syntax import (
    And, Atom, Bottom, Exists, Forall, Implies, Not, Or, Top,
    metas_of, resolve_formula, subst_formula,
)
from .terms import App, Meta
from . import trace as T


@dataclass(frozen=True)
class SearchConfig:
    max_gamma: int = 5
    rewrite_budget: int = DEFAULT_BUDGET
    max_depth: int = 400
    timeout: float = 30.0

    def __post_init__(self):
        for name in ("max_gamma", "rewrite_budget", "max_depth", "timeout"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


class Status(enum.Enum):
    PROVED = "proved"
    EXHAUSTED = "exhausted"
    TIMEOUT = "timeout"


@dataclass
class Stats:
    nodes_expanded: int = 0
    gamma: int = 0
    rewrite_steps: int = 0
    closures_tried: int = 0
    gamma_limit: int = 0
    time: float = 0.0

    def lines(self, trace=None):
        out = [
            f"nodes_expanded={self.nodes_expanded}",
            f"gamma={self.gamma}",
            f"rewrite_steps={self.rewrite_steps}",
            f"gamma_limit={self.gamma_limit}",
        ]
        if trace is not None:
            out += [
                f"proof_nodes={len(trace.nodes)}",
                f"proof_expansions={trace.expansions()}",
                f"proof_closures={trace.closures()}",
            ]
        out.append(f"time={self.time:.4f}")
        return out


@dataclass
class ProofResult:
    status: Status
    trace: T.ProofTrace | None = None
    stats: Stats = field(default_factory=Stats)

    @property
    def proved(self):
        return self.status is Status.PROVED


class _Timeout(Exception):
    pass


# ---------------------------------------------------------------- branches

_ALPHA, _DELTA, _REWRITE, _BETA, _GAMMA = range(5)


def _classify(f):
    """Queue a formula belongs to, or a closure/literal marker."""
    if isinstance(f, Atom):
        return "lit"
    if isinstance(f, Bottom):
        return "contra"
    if isinstance(f, (And,)):
        return _ALPHA
    if isinstance(f, (Or, Implies)):
        return _BETA
    if isinstance(f, Exists):
        return _DELTA
    if isinstance(f, Forall):
        return _GAMMA
    if isinstance(f, Not):
        g = f.body
        if isinstance(g, Atom):
            return "lit"
        if isinstance(g, Top):
            return "contra"
        if isinstance(g, (Not, Or, Implies)):
            return _ALPHA
        if isinstance(g, And):
            return _BETA
        if isinstance(g, Forall):
            return _DELTA
        if isinstance(g, Exists):
            return _GAMMA
    return None  # true, ~false: nothing to do


class _Branch:
    __slots__ = ("queues", "lits", "contra", "gamma_used", "depth", "scanned", "tail", "local")

    def __init__(self):
        self.queues = ((), (), (), (), ())
        self.lits = ()
        self.contra = None
        self.gamma_used = 0
        self.depth = 0
        self.scanned = 0
        self.tail = None
        # id ranges of metavariables that occur on no pending branch
        self.local = ((0, None),)

    def copy(self):
        b = _Branch.__new__(_Branch)
        b.queues = self.queues
        b.lits = self.lits
        b.contra = self.contra
        b.gamma_used = self.gamma_used
        b.depth = self.depth
        b.scanned = self.scanned
        b.tail = self.tail
        b.local = self.local
        return b

    def add(self, serial, formulas, rewrite_literals=True, schedule=True):
        """Extend with a new node holding ``formulas``."""
        b = self.copy()
        b.tail = serial
        b.depth += 1
        if not schedule:
            return b
        queues = list(b.queues)
        lits = list(b.lits)
        for idx, f in enumerate(formulas):
            ref = (serial, idx)
            kind = _classify(f)
            if kind == "lit":
                lits.append((f, ref))
                if rewrite_literals:
                    queues[_REWRITE] += ((f, ref),)
            elif kind == "contra":
                if b.contra is None:
                    b.contra = (f, ref)
            elif kind == _GAMMA:
                queues[kind] += ((f, ref, 0),)
            elif kind is not None:
                queues[kind] += ((f, ref),)
        b.queues = tuple(queues)
        b.lits = tuple(lits)
        return b

    def pop(self, kind, index=0):
        b = self.copy()
        q = list(b.queues)
        entry = q[kind][index]
        q[kind] = q[kind][:index] + q[kind][index + 1:]
        b.queues = tuple(q)
        return b, entry


@dataclass
class _Info:
    """A proof node under construction; ``serial`` is stable across backtracking."""

    serial: int
    rule: str
    formulas: tuple
    source: tuple | None = None
    term: object = None
    closes: tuple = ()
    steps: tuple | None = None


def _in_ranges(mid, ranges):
    for lo, hi in ranges:
        if mid >= lo and (hi is None or mid < hi):
            return True
    return False


def _only_local(new, old, local):
    """True when every binding added in ``new`` is for a local metavariable.

    A metavariable in a local id range still counts as visible when the
    value of a non-local binding mentions it.
    """
    if len(new) == len(old):
        return True
    added = [mid for mid in new if mid not in old]
    if not all(_in_ranges(mid, local) for mid in added):
        return False
    seen = set()
    stack = [v for k, v in old.items() if not _in_ranges(k, local)]
    while stack:
        t = stack.pop()
        if type(t) is Meta:
            if t.id in seen:
                continue
            seen.add(t.id)
            if t.id in old:
                stack.append(old[t.id])
        elif type(t) is App:
            stack.extend(t.args)
    return not any(mid in seen for mid in added)


def _branch_metas(br):
    ids = set()
    for queue in br.queues:
        for entry in queue:
            ids.update(metas_of(entry[0]))
    for f, _ in br.lits:
        ids.update(metas_of(f))
    if br.contra is not None:
        ids.update(metas_of(br.contra[0]))
    return ids


def _signed_atoms(f, positive):
    if isinstance(f, Atom):
        yield f, positive
    elif isinstance(f, Not):
        yield from _signed_atoms(f.body, not positive)
    elif isinstance(f, Implies):
        yield from _signed_atoms(f.left, not positive)
        yield from _signed_atoms(f.right, positive)
    elif isinstance(f, (And, Or)):
        yield from _signed_atoms(f.left, positive)
        yield from _signed_atoms(f.right, positive)
    elif isinstance(f, (Forall, Exists)):
        yield from _signed_atoms(f.body, positive)


def _compatible(s, t):
    """Cheap test that two terms might unify; variables act as wildcards."""
    if type(s) is not App or type(t) is not App:
        return True
    return (s.symbol == t.symbol and len(s.args) == len(t.args)
            and all(map(_compatible, s.args, t.args)))


def _complementary(a, b):
    """(positive atom, negated atom) if the two literals have opposite signs."""
    if isinstance(a, Atom) and isinstance(b, Not):
        pos, neg = a, b.body
    elif isinstance(b, Atom) and isinstance(a, Not):
        pos, neg = b, a.body
    else:
        return None
    if pos.pred != neg.pred or len(pos.args) != len(neg.args):
        return None
    return pos, neg


class Prover:
    """One proof search over a preprocessed problem."""

    def __init__(self, pre: Preprocessed, cfg: SearchConfig = SearchConfig(), name="problem"):
        self.pre = pre
        self.cfg = cfg
        self.name = name
        self.rules = pre.rules
        self.stats = Stats()
        self._serial = itertools.count()
        self._deadline = None
        self._ticks = 0
        self._atom_cache = {}

    # ------------------------------------------------------------ driver

    def run(self) -> ProofResult:
        t0 = time.perf_counter()
        self._deadline = t0 + self.cfg.timeout
        status = Status.EXHAUSTED
        proof = None
        try:
            for limit in range(1, self.cfg.max_gamma + 1):
                self.stats.gamma_limit = limit
                self._limit = limit
                self._gamma_blocked = False
                self.supply = self.pre.supply.copy()
                root_info = _Info(next(self._serial), T.PREMISE, tuple(self.pre.premises()))
                root = _Branch().add(root_info.serial, root_info.formulas)
                for subst, tail in self._solve(root, {}):
                    proof = self._build_trace([(root_info, tail)], subst)
                    status = Status.PROVED
                    break
                if proof is not None or not self._gamma_blocked:
                    break
        except _Timeout:
            status = Status.TIMEOUT
        self.stats.time = time.perf_counter() - t0
        return ProofResult(status, proof, self.stats)

    def _tick(self):
        self._ticks += 1
        if self._ticks & 0xFF == 0 and time.perf_counter() > self._deadline:
            raise _Timeout()

    # ------------------------------------------------------------ search

    def _solve(self, br, subst):
        self._tick()
        if br.contra is not None:
            f, ref = br.contra
            label = T.CLOSE_BOTTOM if isinstance(f, Bottom) else T.CLOSE_NOT_TOP
            yield subst, [(_Info(next(self._serial), label, (), closes=(ref,)), [])]
            return
        alternatives = []
        seen = []
        lits = br.lits
        for i in range(br.scanned, len(lits)):
            fi, ri = lits[i]
            for j in range(i):
                fj, rj = lits[j]
                pair = _complementary(fi, fj)
                if pair is None:
                    continue
                self.stats.closures_tried += 1
                s = kernels.unify_args(pair[0].args, pair[1].args, subst)
                if s is None:
                    continue
                info = _Info(next(self._serial), T.CLOSE, (), closes=(rj, ri))
                if s is subst or _only_local(s, subst, br.local):
                    # nothing outside this branch can observe the new bindings
                    yield s, [(info, [])]
                    return
                if s not in seen:
                    seen.append(s)
                    alternatives.append((s, info))
        for s, info in alternatives:
            yield s, [(info, [])]
        if br.depth >= self.cfg.max_depth:
            self._gamma_blocked = True
            return
        if br.scanned != len(lits):
            br = br.copy()
            br.scanned = len(lits)
        yield from self._expand(br, subst)

    def _child(self, br, info, subst, rewrite_literals=True):
        self.stats.nodes_expanded += 1
        child = br.add(info.serial, info.formulas, rewrite_literals)
        for s, tail in self._solve(child, subst):
            yield s, [(info, tail)]

    def _expand(self, br, subst):
        q = br.queues
        if q[_ALPHA]:
            br, (f, ref) = br.pop(_ALPHA)
            label, forms = _alpha(f)
            info = _Info(next(self._serial), label, forms, source=ref)
            yield from self._child(br, info, subst)
        elif q[_DELTA]:
            br, (f, ref) = br.pop(_DELTA)
            yield from self._child(br, self._delta(f, ref), subst)
        elif q[_REWRITE]:
            br, (f, ref) = br.pop(_REWRITE)
            g, steps = normalize_literal(f, self.rules, self.cfg.rewrite_budget)
            self.stats.rewrite_steps += len(steps)
            if not steps:
                yield from self._expand(br, subst)
                return
            info = _Info(next(self._serial), T.REWRITE, (g,), source=ref, steps=tuple(steps))
            yield from self._child(br, info, subst, rewrite_literals=False)
        elif q[_BETA] or q[_GAMMA]:
            if q[_BETA]:
                br = self._drop_redundant(br, subst)
                q = br.queues
            if q[_BETA]:
                br, (f, ref) = br.pop(_BETA, self._pick_beta(br, subst))
                yield from self._beta_split(br, f, ref, subst)
            elif not q[_GAMMA]:
                return  # saturated: every remaining beta was redundant
            elif br.gamma_used >= self._limit:
                self._gamma_blocked = True
            else:
                yield from self._gamma(br, subst)

    def _beta_split(self, br, f, ref, subst):
        label, left_f, right_f = _beta(f)
        left = _Info(next(self._serial), label, (left_f,), source=ref)
        right = _Info(next(self._serial), label, (right_f,), source=ref)
        self.stats.nodes_expanded += 1
        first, second = (left, right), (right, left)
        if self._closes(right_f, br, subst) > self._closes(left_f, br, subst):
            # the more constrained branch goes first
            first, second = second, first
        split = self.supply.next_meta
        first_br = br.add(first[0].serial, first[0].formulas)
        first_br.local = ((split, None),)
        second_br = br.add(second[0].serial, second[0].formulas)
        second_br.scanned = 0
        kept = tuple((lo, split if hi is None else hi) for lo, hi in br.local if lo < split)
        watched = None
        failed = set()
        for s1, tail1 in self._solve(first_br, subst):
            if watched is None:
                watched = sorted(_branch_metas(second_br))
            # the second branch only sees the bindings of its own metavariables
            key = tuple(kernels.resolve(Meta(m), s1) for m in watched)
            if key in failed:
                continue
            found = False
            second_br.local = kept + ((self.supply.next_meta, None),)
            for s2, tail2 in self._solve(second_br, s1):
                found = True
                done = {first[0].serial: tail1, second[0].serial: tail2}
                yield s2, [(left, done[left.serial]), (right, done[right.serial])]
            if not found:
                if s1 is subst or _only_local(s1, subst, first_br.local):
                    # the most general closure of the first branch already failed on the second
                    return
                failed.add(key)

    def _gamma(self, br, subst):
        # least-used gamma formula first, oldest among equals; a formula that
        # cannot yet connect to any branch literal counts as two uses more
        gq = br.queues[_GAMMA]
        k = min(range(len(gq)), key=lambda i: gq[i][2] + 2 - 2 * self._potential(gq[i][0], br))
        f, ref, uses = gq[k]
        br = br.copy()
        qs = list(br.queues)
        qs[_GAMMA] = gq[:k] + gq[k + 1:] + ((f, ref, uses + 1),)
        br.queues = tuple(qs)
        br.gamma_used += 1
        self.stats.gamma += 1
        # a block of like quantifiers is instantiated in one go and counts once
        chain = []
        while True:
            meta = self.supply.fresh_meta()
            if isinstance(f, Forall):
                label, inst = T.GAMMA_FORALL, subst_formula(f.body, {f.var: meta})
                again = isinstance(inst, Forall)
            else:
                label, inst = T.GAMMA_NOT_EXISTS, Not(subst_formula(f.body.body, {f.body.var: meta}))
                again = isinstance(inst.body, Exists)
            chain.append(_Info(next(self._serial), label, (inst,), source=ref, term=meta))
            if not again:
                break
            f, ref = inst, (chain[-1].serial, 0)
        yield from self._chain(br, chain, subst)

    def _chain(self, br, chain, subst):
        info = chain[0]
        if len(chain) == 1:
            yield from self._child(br, info, subst)
            return
        self.stats.nodes_expanded += 1
        inner = br.add(info.serial, info.formulas, schedule=False)
        for s, tail in self._chain(inner, chain[1:], subst):
            yield s, [(info, tail)]

    def _drop_redundant(self, br, subst):
        """Forget beta formulas that have one side already on the branch.

        Splitting on such a formula only adds a copy of the current branch
        next to a strictly larger one, so the split can never help.
        """
        present = None
        keep = []
        for entry in br.queues[_BETA]:
            _, left, right = _beta(entry[0])
            if _classify(left) == "lit" or _classify(right) == "lit":
                if present is None:
                    present = {resolve_formula(f, subst) for f, _ in br.lits}
                if (resolve_formula(left, subst) in present
                        or resolve_formula(right, subst) in present):
                    continue
            keep.append(entry)
        if len(keep) == len(br.queues[_BETA]):
            return br
        br = br.copy()
        qs = list(br.queues)
        qs[_BETA] = tuple(keep)
        br.queues = tuple(qs)
        return br

    def _potential(self, f, br):
        atoms = self._atom_cache.get(f)
        if atoms is None:
            atoms = self._atom_cache[f] = tuple(_signed_atoms(f, True))
        for atom, positive in atoms:
            for lit, _ in br.lits:
                other = lit.body if isinstance(lit, Not) else lit
                if (isinstance(lit, Not) == positive and other.pred == atom.pred
                        and all(map(_compatible, atom.args, other.args))):
                    return 1
        return 0

    def _closes(self, g, br, subst):
        """How strongly literal ``g`` closes the branch.

        2 when it closes outright, between 1 and 1.5 when it closes only by
        unification (fewer alternatives score higher), else 0.
        """
        kind = _classify(g)
        if kind == "contra":
            return 2
        if kind != "lit":
            return 0
        n = 0
        for h, _ in br.lits:
            pair = _complementary(g, h)
            if pair is not None:
                s = kernels.unify_args(pair[0].args, pair[1].args, subst)
                if s is not None:
                    if s is subst:
                        return 2
                    n += 1
        return 1 + 0.5 / n if n else 0

    def _pick_beta(self, br, subst):
        """Index of the beta formula with the most immediately closing branches."""
        best, best_score = 0, -1
        for i, (f, _) in enumerate(br.queues[_BETA]):
            _, left, right = _beta(f)
            score = self._closes(left, br, subst) + self._closes(right, br, subst)
            if score > best_score:
                best, best_score = i, score
                if score == 4:
                    break
        return best

    def _delta(self, f, ref):
        q = f if isinstance(f, Exists) else f.body
        witness = delta_witness(f, self.supply)
        body = subst_formula(q.body, {q.var: witness})
        if isinstance(f, Exists):
            return _Info(next(self._serial), T.DELTA_EXISTS, (body,), source=ref, term=witness)
        return _Info(next(self._serial), T.DELTA_NOT_FORALL, (Not(body),), source=ref, term=witness)

    # ------------------------------------------------------------- trace

    def _build_trace(self, forest, subst):
        nodes = []
        ids = {}
        pending = []

        def visit(info, tail, parent):
            nid = len(nodes)
            ids[info.serial] = nid
            nodes.append(None)
            pending.append((nid, info, parent))
            for child_info, child_tail in tail:
                visit(child_info, child_tail, nid)

        for info, tail in forest:
            visit(info, tail, None)

        def remap(ref):
            return (ids[ref[0]], ref[1])

        metas = set()
        for nid, info, parent in pending:
            nodes[nid] = T.TraceNode(
                nid, parent, info.rule, info.formulas,
                None if info.source is None else remap(info.source),
                info.term,
                tuple(remap(r) for r in info.closes),
                info.steps,
            )
            if isinstance(info.term, Meta):
                metas.add(info.term.id)
        assignment = {}
        for mid in sorted(metas):
            val = kernels.resolve(Meta(mid), subst)
            if val != Meta(mid):
                assignment[mid] = val
        opts = self.pre.options
        return T.ProofTrace(
            self.name, nodes, assignment,
            {"polarize": opts.polarize, "skolemize": opts.skolemize,
             "orient_axioms": opts.orient_axioms},
        )


def _alpha(f):
    if isinstance(f, And):
        return T.ALPHA_AND, (f.left, f.right)
    g = f.body
    if isinstance(g, Not):
        return T.ALPHA_NOT_NOT, (g.body,)
    if isinstance(g, Or):
        return T.ALPHA_NOT_OR, (Not(g.left), Not(g.right))
    return T.ALPHA_NOT_IMPLIES, (g.left, Not(g.right))


def _beta(f):
    if isinstance(f, Or):
        return T.BETA_OR, f.left, f.right
    if isinstance(f, Implies):
        return T.BETA_IMPLIES, Not(f.left), f.right
    g = f.body
    return T.BETA_NOT_AND, Not(g.left), Not(g.right)


def delta_witness(f, supply):
    """Fresh Skolem term for ``exists x. F`` or ``~forall x. F``.

    The fresh symbol is applied to the metavariables free in the formula, in
    order of first occurrence; it is a constant when there are none.
    """
    return App(supply.fresh_symbol("c"), [Meta(m) for m in metas_of(f)])


def expand(f, supply):
    """Tableau expansion of one formula: ``(label, segments)`` or None.

    Segments are tuples of formulas; a beta rule gives two.
    """
    kind = _classify(f)
    if kind == _ALPHA:
        label, forms = _alpha(f)
        return label, [forms]
    if kind == _BETA:
        label, left, right = _beta(f)
        return label, [(left,), (right,)]
    if kind == _DELTA:
        q = f if isinstance(f, Exists) else f.body
        body = subst_formula(q.body, {q.var: delta_witness(f, supply)})
        if isinstance(f, Exists):
            return T.DELTA_EXISTS, [(body,)]
        return T.DELTA_NOT_FORALL, [(Not(body),)]
    if kind == _GAMMA:
        meta = supply.fresh_meta()
        if isinstance(f, Forall):
            return T.GAMMA_FORALL, [(subst_formula(f.body, {f.var: meta}),)]
        return T.GAMMA_NOT_EXISTS, [(Not(subst_formula(f.body.body, {f.body.var: meta})),)]
    return None


def try_close(literals, subst=None):
    """Closing substitutions for a set of branch formulas, most general first.

    Yields ``(subst, refs)``; an explicit ``false`` or ``~true`` closes with
    the unchanged substitution.
    """
    subst = {} if subst is None else subst
    for i, f in enumerate(literals):
        if _classify(f) == "contra":
            yield subst, (i,)
            return
    for i, fi in enumerate(literals):
        for j in range(i):
            pair = _complementary(fi, literals[j])
            if pair is None:
                continue
            s = kernels.unify_args(pair[0].args, pair[1].args, subst)
            if s is not None:
                yield s, (j, i)


def prove(problem, cfg: SearchConfig = SearchConfig(), options=PreprocessOptions()) -> ProofResult:
    """Refute the residual axioms plus the negated goal modulo the rule set."""
    if isinstance(problem, Problem):
        pre = preprocess_problem(problem, options)
        name = problem.name
    else:
        pre = problem
        name = "problem"
    return Prover(pre, cfg, name).run()

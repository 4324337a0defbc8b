"""Formulas, substitutions, polarity of occurrences and fresh names."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

from . import kernels
from .terms import App, Meta, Term, Var, const

__all__ = [
    "Var", "Meta", "App", "const", "Term",
    "Atom", "Top", "Bottom", "Not", "And", "Or", "Implies", "Iff",
    "Forall", "Exists", "Formula", "TOP", "BOTTOM",
    "Polarity", "InvalidPosition", "polarity_of", "subformula_at",
    "replace_at", "apply_subst", "desugar", "free_vars", "metas_of",
    "is_literal", "is_atom", "NameSupply", "rename_bound", "symbols_of",
    "term_at", "replace_term_at",
]


@dataclass(frozen=True, slots=True)
class Atom:
    pred: str
    args: tuple = ()


@dataclass(frozen=True, slots=True)
class Top:
    pass


@dataclass(frozen=True, slots=True)
class Bottom:
    pass


@dataclass(frozen=True, slots=True)
class Not:
    body: "Formula"


@dataclass(frozen=True, slots=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Iff:
    """Parse-level only; removed by :func:`desugar`."""

    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True, slots=True)
class Exists:
    var: str
    body: "Formula"


TOP = Top()
BOTTOM = Bottom()

Formula = Atom | Top | Bottom | Not | And | Or | Implies | Iff | Forall | Exists

_BINARY = (And, Or, Implies, Iff)
_QUANT = (Forall, Exists)


class Polarity(enum.Enum):
    POSITIVE = "+"
    NEGATIVE = "-"

    def flip(self) -> "Polarity":
        return Polarity.NEGATIVE if self is Polarity.POSITIVE else Polarity.POSITIVE

    def __str__(self):
        return self.value


class InvalidPosition(ValueError):
    pass


def children(f):
    if isinstance(f, Not):
        return (f.body,)
    if isinstance(f, _BINARY):
        return (f.left, f.right)
    if isinstance(f, _QUANT):
        return (f.body,)
    return ()


def is_atom(f) -> bool:
    return isinstance(f, Atom)


def is_literal(f) -> bool:
    return isinstance(f, Atom) or (isinstance(f, Not) and isinstance(f.body, Atom))


def _child_polarity(f, i, pol):
    if isinstance(f, Not):
        return pol.flip()
    if isinstance(f, Implies) and i == 0:
        return pol.flip()
    if isinstance(f, Iff):
        raise InvalidPosition("polarity is undefined below <=>; desugar first")
    return pol


def polarity_of(g, position, start=Polarity.POSITIVE) -> Polarity:
    """Polarity of the subformula occurrence at ``position`` in ``g``.

    Negation and the left side of an implication flip the sign; every other
    connective and both quantifiers preserve it.
    """
    pol = start
    f = g
    for i in position:
        kids = children(f)
        if not 0 <= i < len(kids):
            raise InvalidPosition(f"no child {i} in {type(f).__name__} along {tuple(position)}")
        pol = _child_polarity(f, i, pol)
        f = kids[i]
    return pol


def subformula_at(g, position):
    f = g
    for i in position:
        kids = children(f)
        if not 0 <= i < len(kids):
            raise InvalidPosition(f"no child {i} in {type(f).__name__} along {tuple(position)}")
        f = kids[i]
    return f


def _rebuild(f, kids):
    if isinstance(f, Not):
        return Not(kids[0])
    if isinstance(f, _BINARY):
        return type(f)(kids[0], kids[1])
    return type(f)(f.var, kids[0])


def replace_at(g, position, new):
    if not position:
        return new
    kids = list(children(g))
    i = position[0]
    if not 0 <= i < len(kids):
        raise InvalidPosition(f"no child {i} in {type(g).__name__}")
    kids[i] = replace_at(kids[i], position[1:], new)
    return _rebuild(g, kids)


def term_at(atom, tpos):
    """Subterm of an atom; ``tpos[0]`` selects the argument."""
    if not tpos:
        raise InvalidPosition("empty term position")
    args = atom.args
    t = None
    for i in tpos:
        if not 0 <= i < len(args):
            raise InvalidPosition(f"no argument {i} along term position {tuple(tpos)}")
        t = args[i]
        args = t.args if type(t) is App else ()
    return t


def _replace_in_args(args, tpos, new):
    i = tpos[0]
    if not 0 <= i < len(args):
        raise InvalidPosition(f"no argument {i}")
    items = list(args)
    if len(tpos) == 1:
        items[i] = new
    else:
        t = items[i]
        if type(t) is not App:
            raise InvalidPosition(f"term position goes below a variable at {i}")
        items[i] = App(t.symbol, _replace_in_args(t.args, tpos[1:], new))
    return tuple(items)


def replace_term_at(atom, tpos, new):
    if not tpos:
        raise InvalidPosition("empty term position")
    return Atom(atom.pred, _replace_in_args(atom.args, tpos, new))


# ---------------------------------------------------------------- variables

def _term_vars(t, out):
    tp = type(t)
    if tp is Var:
        out.add(t.name)
    elif tp is App:
        for a in t.args:
            _term_vars(a, out)


def _formula_vars(f, bound, out):
    if isinstance(f, Atom):
        for a in f.args:
            s = set()
            _term_vars(a, s)
            out.update(s - bound)
    elif isinstance(f, _QUANT):
        _formula_vars(f.body, bound | {f.var}, out)
    else:
        for k in children(f):
            _formula_vars(k, bound, out)


def free_vars(x) -> set:
    """Names of free (non-meta) variables of a term or formula."""
    out = set()
    if isinstance(x, (Var, Meta, App)):
        _term_vars(x, out)
    else:
        _formula_vars(x, frozenset(), out)
    return out


def _term_metas(t, out):
    tp = type(t)
    if tp is Meta:
        out.append(t.id)
    elif tp is App:
        for a in t.args:
            _term_metas(a, out)


def metas_of(x) -> list:
    """Meta ids in order of first occurrence (left to right)."""
    acc = []
    if isinstance(x, (Var, Meta, App)):
        _term_metas(x, acc)
    else:
        stack = [x]
        while stack:
            f = stack.pop()
            if isinstance(f, Atom):
                for a in f.args:
                    _term_metas(a, acc)
            else:
                stack.extend(reversed(children(f)))
    return list(dict.fromkeys(acc))


def symbols_of(x, funcs=None, preds=None):
    """Collect function symbols ``{name: arity}`` and predicates into dicts."""
    funcs = {} if funcs is None else funcs
    preds = {} if preds is None else preds

    def term(t):
        if type(t) is App:
            funcs.setdefault(t.symbol, len(t.args))
            for a in t.args:
                term(a)

    stack = [x]
    while stack:
        f = stack.pop()
        if isinstance(f, (Var, Meta, App)):
            term(f)
        elif isinstance(f, Atom):
            preds.setdefault(f.pred, len(f.args))
            for a in f.args:
                term(a)
        else:
            stack.extend(children(f))
    return funcs, preds


# ------------------------------------------------------------- substitution

def _split(subst):
    var_map, meta_map = {}, {}
    for k, v in subst.items():
        if isinstance(k, Var):
            var_map[k.name] = v
        elif isinstance(k, Meta):
            meta_map[k.id] = v
        elif isinstance(k, str):
            var_map[k] = v
        else:
            raise TypeError(f"substitution key must be Var, Meta or str, not {k!r}")
    return var_map, meta_map


def _fresh_bound(name, avoid):
    head, sep, tail = name.rpartition("_")
    base = head if sep and tail.isdigit() else name
    for i in itertools.count(1):
        cand = f"{base}_{i}"
        if cand not in avoid:
            return cand


def _subst_formula(f, var_map, meta_map):
    if isinstance(f, Atom):
        args = tuple(kernels.substitute(a, var_map, meta_map) for a in f.args)
        return f if args == f.args else Atom(f.pred, args)
    if isinstance(f, (Top, Bottom)):
        return f
    if isinstance(f, Not):
        return Not(_subst_formula(f.body, var_map, meta_map))
    if isinstance(f, _BINARY):
        return type(f)(
            _subst_formula(f.left, var_map, meta_map),
            _subst_formula(f.right, var_map, meta_map),
        )
    # quantifier: drop the bound name, rename it if the range would capture it
    inner = {k: v for k, v in var_map.items() if k != f.var}
    body_free = free_vars(f.body) - {f.var}
    incoming = set()
    for k in body_free:
        if k in inner:
            incoming |= free_vars(inner[k])
    for v in meta_map.values():
        incoming |= free_vars(v)
    var = f.var
    if var in incoming:
        var = _fresh_bound(var, incoming | body_free | set(inner))
        inner[f.var] = Var(var)
    return type(f)(var, _subst_formula(f.body, inner, meta_map))


def apply_subst(x, subst):
    """Simultaneous, capture-avoiding substitution on a term or formula.

    ``subst`` maps ``Var`` (or a bare variable name) and ``Meta`` keys to terms.
    """
    if not subst:
        return x
    var_map, meta_map = _split(subst)
    if isinstance(x, (Var, Meta, App)):
        return kernels.substitute(x, var_map, meta_map)
    return _subst_formula(x, var_map, meta_map)


def subst_formula(f, var_map, meta_map=None):
    """Same as :func:`apply_subst` with pre-split name/id maps."""
    if not var_map and not meta_map:
        return f
    return _subst_formula(f, var_map, meta_map or {})


def resolve_formula(f, bindings):
    """Apply triangular meta bindings to every term of ``f``."""
    if not bindings:
        return f
    if isinstance(f, Atom):
        args = tuple(kernels.resolve(a, bindings) for a in f.args)
        return f if args == f.args else Atom(f.pred, args)
    if isinstance(f, (Top, Bottom)):
        return f
    if isinstance(f, Not):
        return Not(resolve_formula(f.body, bindings))
    if isinstance(f, _BINARY):
        return type(f)(resolve_formula(f.left, bindings), resolve_formula(f.right, bindings))
    return type(f)(f.var, resolve_formula(f.body, bindings))


# ------------------------------------------------------------------ desugar

def desugar(f):
    """Replace every ``A <=> B`` by ``(A => B) & (B => A)``."""
    if isinstance(f, Iff):
        a, b = desugar(f.left), desugar(f.right)
        return And(Implies(a, b), Implies(b, a))
    if isinstance(f, (Atom, Top, Bottom)):
        return f
    if isinstance(f, Not):
        return Not(desugar(f.body))
    if isinstance(f, _BINARY):
        return type(f)(desugar(f.left), desugar(f.right))
    return type(f)(f.var, desugar(f.body))


def rename_bound(f, taken=None):
    """Alpha-rename so that no variable name is bound twice in ``f``.

    The first binder of a name keeps it; later ones get ``name_N``.
    """
    taken = set(free_vars(f)) if taken is None else set(taken)

    def go(g, env):
        if isinstance(g, Atom):
            if not env:
                return g
            return Atom(g.pred, tuple(kernels.substitute(a, env, {}) for a in g.args))
        if isinstance(g, (Top, Bottom)):
            return g
        if isinstance(g, Not):
            return Not(go(g.body, env))
        if isinstance(g, _BINARY):
            return type(g)(go(g.left, env), go(g.right, env))
        name = g.var
        if name in taken:
            name = _fresh_bound(name, taken)
            env = {**env, g.var: Var(name)}
        elif g.var in env:
            env = {k: v for k, v in env.items() if k != g.var}
        taken.add(name)
        return type(g)(name, go(g.body, env))

    return go(f, {})


# ------------------------------------------------------------- fresh names

class NameSupply:
    """Fresh symbol and metavariable generator for one prover run.

    Not thread-safe; use one supply per search.
    """

    def __init__(self, used=(), next_meta=1):
        self.used = set(used)
        self.next_meta = next_meta

    def reserve(self, names):
        self.used.update(names)

    def fresh_symbol(self, base: str) -> str:
        if base not in self.used:
            self.used.add(base)
            return base
        for i in itertools.count(1):
            cand = f"{base}_{i}"
            if cand not in self.used:
                self.used.add(cand)
                return cand

    def fresh_meta(self) -> Meta:
        m = Meta(self.next_meta)
        self.next_meta += 1
        return m

    def copy(self) -> "NameSupply":
        return NameSupply(self.used, self.next_meta)

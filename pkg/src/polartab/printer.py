"""Canonical ASCII printing of terms and formulas.

Binary connectives and quantifiers are always parenthesized, so the output
re-parses to the identical tree.
"""

from .syntax import (
    And, Atom, Bottom, Exists, Forall, Iff, Implies, Not, Or, Top,
)
from .terms import App, Meta, Var

INFIX_PREDICATES = ("in", "subset")

_OPS = {And: "&", Or: "|", Implies: "=>", Iff: "<=>"}


def term_str(t) -> str:
    tp = type(t)
    if tp is Var:
        return t.name
    if tp is Meta:
        return f"?M{t.id}"
    if not t.args:
        return t.symbol
    return f"{t.symbol}({', '.join(term_str(a) for a in t.args)})"


def _is_infix(f):
    return isinstance(f, Atom) and f.pred in INFIX_PREDICATES and len(f.args) == 2


def formula_str(f) -> str:
    if isinstance(f, Atom):
        if _is_infix(f):
            return f"{term_str(f.args[0])} {f.pred} {term_str(f.args[1])}"
        if not f.args:
            return f.pred
        return f"{f.pred}({', '.join(term_str(a) for a in f.args)})"
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Not):
        inner = formula_str(f.body)
        return f"~({inner})" if _is_infix(f.body) else f"~{inner}"
    if isinstance(f, Forall):
        return f"(forall {f.var}. {formula_str(f.body)})"
    if isinstance(f, Exists):
        return f"(exists {f.var}. {formula_str(f.body)})"
    op = _OPS[type(f)]
    return f"({formula_str(f.left)} {op} {formula_str(f.right)})"


def show(x) -> str:
    if isinstance(x, (Var, Meta, App)):
        return term_str(x)
    return formula_str(x)

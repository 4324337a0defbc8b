"""Problem-file parser.

Concrete syntax (one declaration per ``.``-terminated item, ``#`` comments)::

    axiom NAME: FORMULA.
    rewrite NAME: ATOM -> FORMULA.      # unpolarized, used at both polarities
    rewrite+ NAME: ATOM -> FORMULA.
    rewrite- NAME: ATOM -> FORMULA.
    rule_term NAME: TERM -> TERM.
    goal NAME: FORMULA.

Connectives by increasing binding strength: ``<=>``, ``=>`` (right
associative), ``|``, ``&``, ``~``. ``forall X Y. F`` and ``exists X. F``
extend as far right as possible. ``t in s`` and ``t subset s`` are infix
predicates; ``true``/``false`` are the constants. An identifier is a
variable when bound by an enclosing quantifier or, inside rule
declarations, when it starts with an upper-case letter. ``?M3`` denotes a
metavariable (accepted in traces only).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ArityError, DuplicateName, IllFormedRule, NoGoal, ParseError
from .printer import INFIX_PREDICATES
from .syntax import (
    BOTTOM, TOP, And, Atom, Exists, Forall, Iff, Implies, Not, Or,
    children, free_vars, rename_bound, symbols_of,
)
from .terms import App, Meta, Var

KINDS = ("axiom", "rewrite", "rewrite+", "rewrite-", "rule_term", "goal")
_KEYWORDS = {"forall", "exists", "true", "false", "in", "subset"}

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+|\#[^\n]*)
  | (?P<nl>\n)
  | (?P<meta>\?M[0-9]+)
  | (?P<op><=>|=>|->|[~&|().,:+\-])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text):
    out = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind != "ws":
            out.append(Token(kind, m.group(), line, m.start() - line_start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


@dataclass(frozen=True)
class Declaration:
    kind: str
    name: str
    formula: object = None
    lhs: object = None
    rhs: object = None
    line: int = 0


@dataclass
class Problem:
    name: str
    declarations: list = field(default_factory=list)

    @property
    def goal(self):
        return next(d for d in self.declarations if d.kind == "goal")

    @property
    def axioms(self):
        return [d for d in self.declarations if d.kind == "axiom"]

    def signature(self):
        """All function and predicate symbols used by the problem."""
        funcs, preds = {}, {}
        for d in self.declarations:
            for x in (d.formula, d.lhs, d.rhs):
                if x is not None:
                    symbols_of(x, funcs, preds)
        return funcs, preds


class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0
        self.rule_vars = False
        self.metas = True

    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, msg, tok=None, cls=ParseError):
        tok = tok or self.tok
        return cls(msg, tok.line, tok.col)

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, text):
        t = self.tok
        return t.kind in ("op", "ident") and t.text == text

    def expect(self, text):
        if not self.at(text):
            shown = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {shown!r}")
        return self.next()

    def ident(self, what="identifier"):
        t = self.tok
        if t.kind != "ident" or t.text in _KEYWORDS:
            raise self.error(f"expected {what}, found {t.text or 'end of input'!r}")
        return self.next().text

    # ----------------------------------------------------------- formulas

    def formula(self, bound):
        left = self.implication(bound)
        if self.at("<=>"):
            self.next()
            return Iff(left, self.formula(bound))
        return left

    def implication(self, bound):
        left = self.disjunction(bound)
        if self.at("=>"):
            self.next()
            return Implies(left, self.implication(bound))
        return left

    def disjunction(self, bound):
        left = self.conjunction(bound)
        while self.at("|"):
            self.next()
            left = Or(left, self.conjunction(bound))
        return left

    def conjunction(self, bound):
        left = self.unary(bound)
        while self.at("&"):
            self.next()
            left = And(left, self.unary(bound))
        return left

    def unary(self, bound):
        t = self.tok
        if self.at("~"):
            self.next()
            return Not(self.unary(bound))
        if self.at("("):
            self.next()
            f = self.formula(bound)
            self.expect(")")
            return f
        if self.at("forall") or self.at("exists"):
            q = Forall if self.next().text == "forall" else Exists
            names = [self.ident("bound variable")]
            while self.tok.kind == "ident" and self.tok.text not in _KEYWORDS:
                names.append(self.next().text)
            self.expect(".")
            body = self.formula(bound | set(names))
            for n in reversed(names):
                body = q(n, body)
            return body
        if self.at("true"):
            self.next()
            return TOP
        if self.at("false"):
            self.next()
            return BOTTOM
        if t.kind not in ("ident", "meta"):
            raise self.error(f"expected a formula, found {t.text or 'end of input'!r}")
        return self.atom(bound)

    def atom(self, bound):
        start = self.tok
        lhs = self.term(bound)
        for p in INFIX_PREDICATES:
            if self.at(p):
                self.next()
                return Atom(p, (lhs, self.term(bound)))
        if type(lhs) is not App:
            raise self.error("a variable cannot stand for a formula", start, IllFormedRule
                             if self.rule_vars else ParseError)
        return Atom(lhs.symbol, lhs.args)

    def term(self, bound):
        t = self.tok
        if t.kind == "meta":
            if not self.metas:
                raise self.error(f"metavariable {t.text} outside a trace")
            self.next()
            return Meta(int(t.text[2:]))
        name = self.ident("term")
        if self.at("("):
            self.next()
            args = [self.term(bound)]
            while self.at(","):
                self.next()
                args.append(self.term(bound))
            self.expect(")")
            return App(name, args)
        if name in bound or (self.rule_vars and name[0].isupper()):
            return Var(name)
        return App(name, ())

    # ------------------------------------------------------- declarations

    def declaration(self):
        start = self.tok
        kind = self.ident("declaration keyword")
        if kind == "rewrite" and (self.at("+") or self.at("-")):
            kind += self.next().text
        if kind not in KINDS:
            raise self.error(f"unknown declaration kind {kind!r}", start)
        name = self.ident("declaration name")
        self.expect(":")
        if kind in ("axiom", "goal"):
            self.rule_vars = False
            f = self.formula(frozenset())
            self.expect(".")
            if free_vars(f):
                raise self.error(f"{kind} {name} is not closed: free {sorted(free_vars(f))}", start)
            return Declaration(kind, name, formula=rename_bound(f), line=start.line)
        self.rule_vars = True
        try:
            if kind == "rule_term":
                lhs = self.term(frozenset())
            else:
                lhs = self.unary(frozenset())
            self.expect("->")
            if kind == "rule_term":
                rhs = self.term(frozenset())
            else:
                rhs = self.formula(frozenset())
                rhs = rename_bound(rhs, free_vars(rhs) | free_vars(lhs))
            self.expect(".")
        finally:
            self.rule_vars = False
        return Declaration(kind, name, lhs=lhs, rhs=rhs, line=start.line)

    def problem(self, name):
        decls = []
        while self.tok.kind != "eof":
            decls.append(self.declaration())
        return Problem(name, decls)

    def finish(self):
        if self.tok.kind != "eof":
            raise self.error(f"trailing input {self.tok.text!r}")


def _check_arities(decls):
    seen = {}
    def visit(kind, name, arity, decl):
        key = (kind, name)
        if key in seen and seen[key] != arity:
            raise ArityError(
                f"{kind} {name!r} used with arity {seen[key]} and {arity}", decl.line, 1)
        seen[key] = arity

    def term(t, decl):
        if type(t) is App:
            visit("function", t.symbol, len(t.args), decl)
            for a in t.args:
                term(a, decl)

    for d in decls:
        stack = [x for x in (d.formula, d.lhs, d.rhs) if x is not None]
        while stack:
            f = stack.pop()
            if isinstance(f, (Var, Meta, App)):
                term(f, d)
            elif isinstance(f, Atom):
                visit("predicate", f.pred, len(f.args), d)
                for a in f.args:
                    term(a, d)
            else:
                stack.extend(children(f))


def parse_problem(text, name="problem") -> Problem:
    parser = _Parser(text)
    parser.metas = False
    prob = parser.problem(name)
    names = set()
    for d in prob.declarations:
        if d.name in names:
            raise DuplicateName(f"duplicate declaration name {d.name!r}", d.line, 1)
        names.add(d.name)
    goals = [d for d in prob.declarations if d.kind == "goal"]
    if not goals:
        raise NoGoal("problem has no goal")
    if len(goals) > 1:
        raise ParseError(f"problem has {len(goals)} goals, expected one", goals[1].line, 1)
    _check_arities(prob.declarations)
    return prob


def parse_formula(text, rule_vars=False):
    p = _Parser(text)
    p.rule_vars = rule_vars
    f = p.formula(frozenset())
    p.finish()
    return f


def parse_term(text, rule_vars=False):
    p = _Parser(text)
    p.rule_vars = rule_vars
    t = p.term(frozenset())
    p.finish()
    return t


def load_problem(path) -> Problem:
    from pathlib import Path
    path = Path(path)
    return parse_problem(path.read_text(), name=path.stem)

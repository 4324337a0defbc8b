"""Term rewriting and polarized propositional rewriting of literals."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from . import kernels
from .errors import IllFormedRule, RewriteLimitExceeded, UnknownRule
from .syntax import (
    App, Atom, Implies, Not, Polarity, apply_subst, children, free_vars, is_literal,
    polarity_of, replace_at, replace_term_at, subformula_at, subst_formula, term_at,
)
from .syntax import InvalidPosition, Var

DEFAULT_BUDGET = 10_000


class RuleKind(enum.Enum):
    POSITIVE = "+"
    NEGATIVE = "-"
    BOTH = "both"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class TermRule:
    name: str
    lhs: object
    rhs: object
    origin: str | None = None

    def __post_init__(self):
        if type(self.lhs) is Var:
            raise IllFormedRule(f"term rule {self.name}: left-hand side is a bare variable")
        extra = free_vars(self.rhs) - free_vars(self.lhs)
        if extra:
            raise IllFormedRule(
                f"term rule {self.name}: variables {sorted(extra)} of the right-hand side "
                "do not occur on the left")


@dataclass(frozen=True)
class PropRule:
    name: str
    lhs: Atom
    rhs: object
    polarity: RuleKind
    skolemized: bool = False
    origin: str | None = None

    def __post_init__(self):
        if not isinstance(self.lhs, Atom):
            raise IllFormedRule(f"rule {self.name}: left-hand side must be atomic")
        extra = free_vars(self.rhs) - free_vars(self.lhs)
        if extra:
            raise IllFormedRule(
                f"rule {self.name}: variables {sorted(extra)} of the right-hand side "
                "do not occur on the left")


@dataclass
class RuleSet:
    term_rules: list = field(default_factory=list)
    pos_rules: list = field(default_factory=list)
    neg_rules: list = field(default_factory=list)

    @classmethod
    def build(cls, term_rules=(), prop_rules=()):
        rs = cls(list(term_rules))
        for r in prop_rules:
            if r.polarity in (RuleKind.POSITIVE, RuleKind.BOTH):
                rs.pos_rules.append(r)
            if r.polarity in (RuleKind.NEGATIVE, RuleKind.BOTH):
                rs.neg_rules.append(r)
        rs.check_names()
        return rs

    def prop_rules(self):
        """Distinct propositional rules in declaration order."""
        seen = {}
        for r in self.pos_rules + self.neg_rules:
            seen.setdefault(r.name, r)
        return list(seen.values())

    def all_rules(self):
        return list(self.term_rules) + self.prop_rules()

    def check_names(self):
        names = [r.name for r in self.all_rules()]
        if len(names) != len(set(names)):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise IllFormedRule(f"duplicate rule names {dup}")

    def get(self, name):
        for r in self.all_rules():
            if r.name == name:
                return r
        raise UnknownRule(name)

    def for_polarity(self, pol):
        return self.pos_rules if pol is Polarity.POSITIVE else self.neg_rules

    def __bool__(self):
        return bool(self.term_rules or self.pos_rules or self.neg_rules)


@dataclass(frozen=True)
class RewriteStep:
    """One recorded rewrite step.

    ``position`` addresses the rewritten atom inside the formula; for term
    rules ``term_position`` addresses the redex inside that atom.
    """

    rule: str
    position: tuple
    term_position: tuple | None
    subst: dict
    result: object


def match_pattern(lhs, target):
    """Substitution (by variable name) with ``lhs`` instantiated to ``target``."""
    if isinstance(lhs, Atom):
        if not isinstance(target, Atom) or lhs.pred != target.pred:
            return None
        return kernels.match_args(lhs.args, target.args)
    if isinstance(target, Atom):
        return None
    return kernels.match(lhs, target)


def _instantiate_term(t, sigma):
    return kernels.substitute(t, sigma, {})


def rewrite_term_once(t, rules):
    """Leftmost-innermost single step: ``(new_term, rule_name, position)`` or None."""
    term_rules = rules.term_rules if isinstance(rules, RuleSet) else rules
    if not term_rules:
        return None
    return _rewrite_term_once(t, term_rules)


def _rewrite_term_once(t, term_rules):
    if type(t) is App:
        for i, a in enumerate(t.args):
            hit = _rewrite_term_once(a, term_rules)
            if hit is not None:
                new, name, pos, sigma = hit
                args = list(t.args)
                args[i] = new
                return App(t.symbol, args), name, (i,) + pos, sigma
    for r in term_rules:
        sigma = kernels.match(r.lhs, t)
        if sigma is not None:
            return _instantiate_term(r.rhs, sigma), r.name, (), sigma
    return None


def _atom_of(lit):
    if isinstance(lit, Atom):
        return lit, ()
    if isinstance(lit, Not) and isinstance(lit.body, Atom):
        return lit.body, (0,)
    raise ValueError(f"not a literal: {lit!r}")


def _term_step(lit, term_rules):
    atom, apos = _atom_of(lit)
    for i, a in enumerate(atom.args):
        hit = _rewrite_term_once(a, term_rules)
        if hit is not None:
            new, name, pos, sigma = hit
            new_atom = replace_term_at(atom, (i,), new)
            return RewriteStep(name, apos, (i,) + pos, sigma, replace_at(lit, apos, new_atom))
    return None


def normalize_terms(lit, rules, budget=DEFAULT_BUDGET, _log=None):
    """Rewrite every term of a literal to normal form.

    Returns the new literal and its step log. Raises ``RewriteLimitExceeded``
    when more than ``budget`` steps would be needed.
    """
    log = [] if _log is None else _log
    term_rules = rules.term_rules
    if not term_rules:
        return lit, log
    while True:
        st = _term_step(lit, term_rules)
        if st is None:
            return lit, log
        if len(log) >= budget:
            raise RewriteLimitExceeded(lit, budget)
        log.append(st)
        lit = st.result


def rewrite_literal_once(lit, rules):
    """One polarized propositional step on a literal, as a ``RewriteStep``.

    A positive atom is rewritten with the first matching rule of R+, the
    atom under a negation with the first matching rule of R-. None when no
    rule applies.
    """
    atom, apos = _atom_of(lit)
    pol = Polarity.NEGATIVE if apos else Polarity.POSITIVE
    for r in rules.for_polarity(pol):
        if r.lhs.pred != atom.pred:
            continue
        sigma = kernels.match_args(r.lhs.args, atom.args)
        if sigma is not None:
            new = subst_formula(r.rhs, sigma)
            return RewriteStep(r.name, apos, None, sigma, replace_at(lit, apos, new))
    return None


def normalize_literal(lit, rules, budget=DEFAULT_BUDGET):
    """Forward normalization of a literal.

    Alternates term normalization with a single propositional step until the
    literal is in normal form or has become compound. Returns the final
    formula and the ordered step log.
    """
    log = []
    if not rules:
        return lit, log
    while True:
        lit, _ = normalize_terms(lit, rules, budget, log)
        st = rewrite_literal_once(lit, rules)
        if st is None:
            return lit, log
        if len(log) >= budget:
            raise RewriteLimitExceeded(lit, budget)
        log.append(st)
        lit = st.result
        if not is_literal(lit):
            return lit, log


def apply_step(f, pol, rule, position, term_position, sigma):
    """Result of firing ``rule`` at ``position`` in ``f``, or None if illegal."""
    try:
        target = subformula_at(f, position)
    except InvalidPosition:
        return None
    if not isinstance(target, Atom):
        return None
    sigma = dict(sigma)
    if isinstance(rule, TermRule):
        if term_position is None or set(sigma) != free_vars(rule.lhs):
            return None
        try:
            redex = term_at(target, term_position)
        except InvalidPosition:
            return None
        if _instantiate_term(rule.lhs, sigma) != redex:
            return None
        new_atom = replace_term_at(target, term_position, _instantiate_term(rule.rhs, sigma))
        return replace_at(f, position, new_atom)
    if term_position is not None or set(sigma) != free_vars(rule.lhs):
        return None
    if apply_subst(rule.lhs, sigma) != target:
        return None
    return replace_at(f, position, apply_subst(rule.rhs, sigma))


def check_rewrite_step(f, pol, rule_name, position, term_position, sigma, g, rules):
    """Reason why the step is rejected, or None when it is valid.

    Raises ``UnknownRule`` for a rule name that is not in ``rules``.
    """
    rule = rules.get(rule_name)
    position = tuple(position)
    if isinstance(rule, PropRule):
        try:
            occ = polarity_of(f, position, start=pol)
        except InvalidPosition:
            return "invalid position"
        if all(r.name != rule_name for r in rules.for_polarity(occ)):
            return f"polarity: rule {rule_name} cannot rewrite a {occ.name.lower()} occurrence"
    result = apply_step(f, pol, rule, position, term_position, sigma)
    if result is None:
        return f"rule {rule_name} does not apply at {position}"
    if result != g:
        return "result does not match"
    return None


def verify_rewrite_step(f, pol, rule_name, position, term_position, sigma, g, rules):
    """Accept iff the named rule, fired with ``sigma`` at ``position``, turns ``f`` into ``g``.

    ``pol`` is the polarity of ``f`` itself (positive for formulas asserted on
    a tableau branch). Propositional rules must sit in R+ at positive
    occurrences and in R- at negative ones; term rules fire anywhere.
    """
    return check_rewrite_step(f, pol, rule_name, position, term_position, sigma, g, rules) is None


def _atom_positions(f, pos=(), pol=Polarity.POSITIVE):
    if isinstance(f, Atom):
        yield pos, pol, f
        return
    for i, k in enumerate(children(f)):
        kp = pol.flip() if isinstance(f, Not) or (i == 0 and isinstance(f, Implies)) else pol
        yield from _atom_positions(k, pos + (i,), kp)


def _subterm_positions(t, prefix):
    yield prefix, t
    if type(t) is App:
        for i, a in enumerate(t.args):
            yield from _subterm_positions(a, prefix + (i,))


def all_steps(f, rules, pol=Polarity.POSITIVE):
    """Every single polarized step available anywhere in ``f``."""
    for pos, occ, atom in _atom_positions(f, (), pol):
        for i, a in enumerate(atom.args):
            for tpos, sub in _subterm_positions(a, (i,)):
                for r in rules.term_rules:
                    sigma = kernels.match(r.lhs, sub)
                    if sigma is not None:
                        new_atom = replace_term_at(atom, tpos, _instantiate_term(r.rhs, sigma))
                        yield RewriteStep(r.name, pos, tpos, sigma, replace_at(f, pos, new_atom))
        for r in rules.for_polarity(occ):
            sigma = match_pattern(r.lhs, atom)
            if sigma is not None:
                yield RewriteStep(r.name, pos, None, sigma,
                                  replace_at(f, pos, apply_subst(r.rhs, sigma)))

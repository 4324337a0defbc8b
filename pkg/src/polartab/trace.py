"""Proof traces and their JSON-lines serialization.

A trace is one header line followed by one record per tableau node::

    {"format": "polartab-trace", "version": 1, "problem": ..., "options": {...},
     "substitution": {"1": "c"}}
    {"id": 0, "parent": null, "rule": "premise", "formulas": ["~(a subset a)"]}
    {"id": 1, "parent": 0, "rule": "↠+", "source": [0, 0], "formulas": [...],
     "steps": [{"rule": "incl_neg", "position": [0], "term_position": null,
                "subst": {"X": "a", "Y": "a"}, "result": "..."}]}
    {"id": 3, "parent": 2, "rule": "⊙", "closes": [[2, 1], [2, 0]]}

Formulas are stored in canonical printed form. ``steps`` is null when the
rewrite details are elided, in which case only source and result are known.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import MalformedTrace, ParseError
from .parser import parse_formula, parse_term
from .printer import show
from .rewrite import RewriteStep

PREMISE = "premise"
CLOSE = "⊙"
CLOSE_BOTTOM = "⊙⊥"
CLOSE_NOT_TOP = "⊙¬⊤"
ALPHA_NOT_NOT = "α¬¬"
ALPHA_AND = "α∧"
ALPHA_NOT_OR = "α¬∨"
ALPHA_NOT_IMPLIES = "α¬⇒"
BETA_OR = "β∨"
BETA_NOT_AND = "β¬∧"
BETA_IMPLIES = "β⇒"
DELTA_EXISTS = "δ∃"
DELTA_NOT_FORALL = "δ¬∀"
GAMMA_FORALL = "γ∀"
GAMMA_NOT_EXISTS = "γ¬∃"
REWRITE = "↠+"

CLOSURES = (CLOSE, CLOSE_BOTTOM, CLOSE_NOT_TOP)
ALPHAS = (ALPHA_NOT_NOT, ALPHA_AND, ALPHA_NOT_OR, ALPHA_NOT_IMPLIES)
BETAS = (BETA_OR, BETA_NOT_AND, BETA_IMPLIES)
DELTAS = (DELTA_EXISTS, DELTA_NOT_FORALL)
GAMMAS = (GAMMA_FORALL, GAMMA_NOT_EXISTS)
LABELS = (PREMISE, REWRITE) + CLOSURES + ALPHAS + BETAS + DELTAS + GAMMAS

FORMAT = "polartab-trace"
VERSION = 1


@dataclass(frozen=True)
class TraceNode:
    id: int
    parent: int | None
    rule: str
    formulas: tuple = ()
    source: tuple | None = None     # (node id, formula index) of the expanded formula
    term: object = None             # gamma instance term or delta witness
    closes: tuple = ()              # ((node id, index), ...) for closure nodes
    steps: tuple | None = None      # RewriteStep records for ↠+ nodes


@dataclass
class ProofTrace:
    problem: str
    nodes: list
    substitution: dict = field(default_factory=dict)    # meta id -> term
    options: dict = field(default_factory=dict)

    def node(self, nid):
        return self.nodes[nid]

    def children(self, nid):
        return [n for n in self.nodes if n.parent == nid]

    def expansions(self):
        """Rule applications other than premises and closures; a beta pair counts once."""
        count = 0
        seen_beta = set()
        for n in self.nodes:
            if n.rule == PREMISE or n.rule in CLOSURES:
                continue
            if n.rule in BETAS:
                key = (n.parent, n.source)
                if key in seen_beta:
                    continue
                seen_beta.add(key)
            count += 1
        return count

    def closures(self):
        return sum(1 for n in self.nodes if n.rule in CLOSURES)

    def labels(self):
        return [n.rule for n in self.nodes]

    def elide_rewrites(self):
        """Copy of the trace with every rewrite step detail dropped."""
        nodes = [
            TraceNode(n.id, n.parent, n.rule, n.formulas, n.source, n.term, n.closes, None)
            if n.rule == REWRITE else n
            for n in self.nodes
        ]
        return ProofTrace(self.problem, nodes, dict(self.substitution), dict(self.options))


def _ref(x):
    return None if x is None else list(x)


def _step_json(st):
    return {
        "rule": st.rule,
        "position": list(st.position),
        "term_position": _ref(st.term_position),
        "subst": {k: show(v) for k, v in sorted(st.subst.items())},
        "result": show(st.result),
    }


def serialize_trace(trace: ProofTrace) -> str:
    header = {
        "format": FORMAT,
        "version": VERSION,
        "problem": trace.problem,
        "options": trace.options,
        "substitution": {str(k): show(v) for k, v in sorted(trace.substitution.items())},
    }
    lines = [json.dumps(header, ensure_ascii=False)]
    for n in trace.nodes:
        rec = {"id": n.id, "parent": n.parent, "rule": n.rule}
        if n.formulas:
            rec["formulas"] = [show(f) for f in n.formulas]
        if n.source is not None:
            rec["source"] = list(n.source)
        if n.term is not None:
            rec["term"] = show(n.term)
        if n.closes:
            rec["closes"] = [list(r) for r in n.closes]
        if n.rule == REWRITE:
            rec["steps"] = None if n.steps is None else [_step_json(s) for s in n.steps]
        lines.append(json.dumps(rec, ensure_ascii=False))
    return "\n".join(lines) + "\n"


def _pair(x, what):
    if not (isinstance(x, list) and len(x) == 2 and all(isinstance(i, int) for i in x)):
        raise MalformedTrace(f"{what} must be a [node, index] pair, got {x!r}")
    return tuple(x)


def _ints(x, what):
    if not (isinstance(x, list) and all(isinstance(i, int) for i in x)):
        raise MalformedTrace(f"{what} must be a list of integers, got {x!r}")
    return tuple(x)


def _parse_step(d):
    try:
        tpos = d["term_position"]
        return RewriteStep(
            d["rule"],
            _ints(d["position"], "position"),
            None if tpos is None else _ints(tpos, "term_position"),
            {k: parse_term(v) for k, v in d["subst"].items()},
            parse_formula(d["result"]),
        )
    except (KeyError, TypeError, AttributeError) as e:
        raise MalformedTrace(f"bad rewrite step {d!r}") from e


def parse_trace(text: str) -> ProofTrace:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MalformedTrace("empty trace")
    try:
        header = json.loads(lines[0])
        records = [json.loads(ln) for ln in lines[1:]]
    except json.JSONDecodeError as e:
        raise MalformedTrace(f"invalid JSON: {e}") from e
    if not isinstance(header, dict) or header.get("format") != FORMAT:
        raise MalformedTrace("missing trace header")
    if header.get("version") != VERSION:
        raise MalformedTrace(f"unsupported trace version {header.get('version')!r}")
    try:
        subst = {int(k): parse_term(v) for k, v in header.get("substitution", {}).items()}
        nodes = []
        for i, r in enumerate(records):
            if not isinstance(r, dict):
                raise MalformedTrace(f"record {i} is not an object")
            if r.get("id") != i:
                raise MalformedTrace(f"record {i} has id {r.get('id')!r}")
            rule = r.get("rule")
            if rule not in LABELS:
                raise MalformedTrace(f"record {i}: unknown rule label {rule!r}")
            parent = r.get("parent")
            if parent is not None and not isinstance(parent, int):
                raise MalformedTrace(f"record {i}: bad parent {parent!r}")
            steps = None
            if r.get("steps") is not None:
                steps = tuple(_parse_step(s) for s in r["steps"])
            nodes.append(TraceNode(
                i, parent, rule,
                tuple(parse_formula(f) for f in r.get("formulas", [])),
                None if r.get("source") is None else _pair(r["source"], "source"),
                None if r.get("term") is None else parse_term(r["term"]),
                tuple(_pair(c, "closes") for c in r.get("closes", [])),
                steps,
            ))
    except ParseError as e:
        raise MalformedTrace(f"unparsable formula or term: {e}") from e
    except (TypeError, ValueError, AttributeError) as e:
        raise MalformedTrace(str(e)) from e
    if not nodes:
        raise MalformedTrace("trace has no nodes")
    return ProofTrace(header.get("problem", ""), nodes, subst, dict(header.get("options", {})))

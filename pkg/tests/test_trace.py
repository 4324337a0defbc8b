import json
from pathlib import Path

import pytest

from polartab import (
    MalformedTrace, load_problem, parse_formula, parse_trace, prove, serialize_trace,
)
from polartab import trace as T

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"
GOLDEN = ["subset_refl", "subset_trans", "union_least", "declared_rules", "drinker",
          "union_empty", "pelletier18"]


@pytest.fixture(scope="module")
def traces():
    return {name: prove(load_problem(PROBLEMS / f"{name}.p")).trace for name in GOLDEN}


def test_refl_trace_has_four_records(traces):
    tr = traces["subset_refl"]
    assert tr.labels() == [T.PREMISE, T.REWRITE, T.ALPHA_NOT_IMPLIES, T.CLOSE]
    assert tr.nodes[0].formulas == (parse_formula("~(a subset a)"),)
    text = serialize_trace(tr)
    assert len(text.splitlines()) == 5  # header plus one line per node
    assert parse_trace(text) == tr


@pytest.mark.parametrize("name", GOLDEN)
def test_round_trip(traces, name):
    tr = traces[name]
    text = serialize_trace(tr)
    assert parse_trace(text) == tr
    assert serialize_trace(parse_trace(text)) == text


def test_elided_round_trip(traces):
    tr = traces["subset_refl"].elide_rewrites()
    text = serialize_trace(tr)
    assert json.loads(text.splitlines()[2])["steps"] is None
    assert parse_trace(text) == tr


@pytest.mark.parametrize("text", [
    "",
    "\n\n",
    "not json\n",
    '{"format": "other"}\n{"id": 0, "parent": null, "rule": "premise"}\n',
    '{"format": "polartab-trace", "version": 99}\n{"id": 0, "parent": null, "rule": "premise"}\n',
    '{"format": "polartab-trace", "version": 1}\n',
    '{"format": "polartab-trace", "version": 1}\n{"id": 1, "parent": null, "rule": "premise"}\n',
    '{"format": "polartab-trace", "version": 1}\n{"id": 0, "parent": null, "rule": "lemma"}\n',
    '{"format": "polartab-trace", "version": 1}\n'
    '{"id": 0, "parent": null, "rule": "premise", "formulas": ["p &"]}\n',
    '{"format": "polartab-trace", "version": 1}\n'
    '{"id": 0, "parent": null, "rule": "premise", "source": [1]}\n',
    '{"format": "polartab-trace", "version": 1}\n'
    '{"id": 0, "parent": null, "rule": "↠+", "steps": [{"rule": "r"}]}\n',
    '{"format": "polartab-trace", "version": 1}\n[1, 2]\n',
])
def test_malformed(text):
    with pytest.raises(MalformedTrace):
        parse_trace(text)


def test_counts(traces):
    tr = traces["subset_trans"]
    betas = [n for n in tr.nodes if n.rule in T.BETAS]
    assert len(betas) % 2 == 0
    assert tr.expansions() == sum(
        1 for n in tr.nodes if n.rule not in T.CLOSURES + (T.PREMISE,) + T.BETAS
    ) + len(betas) // 2
    assert tr.closures() == sum(1 for n in tr.nodes if n.rule in T.CLOSURES)

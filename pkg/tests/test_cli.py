import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from polartab.cli import main

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"
REFL = str(PROBLEMS / "subset_refl.p")


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def stats(text):
    return dict(line.split("=", 1) for line in text.splitlines() if "=" in line)


def test_prove_writes_trace(tmp_path):
    tr = tmp_path / "out.tr"
    code, out, _ = run("prove", REFL, "--trace", str(tr))
    assert code == 0 and out.splitlines()[0] == "proved"
    header = json.loads(tr.read_text().splitlines()[0])
    assert header["format"] == "polartab-trace"


def test_no_polarize_costs_one_more_step():
    _, out, _ = run("prove", REFL, "--stats")
    _, out_np, _ = run("prove", REFL, "--stats", "--no-polarize")
    s, s_np = stats(out), stats(out_np)
    assert int(s_np["proof_expansions"]) == int(s["proof_expansions"]) + 1 == 3
    assert s["proof_closures"] == s_np["proof_closures"] == "1"
    for key in ("nodes_expanded", "gamma", "rewrite_steps", "time"):
        assert key in s


def test_check_valid_and_corrupted(tmp_path):
    tr = tmp_path / "ok.tr"
    run("prove", REFL, "--trace", str(tr))
    code, out, _ = run("check", REFL, "--trace", str(tr))
    assert (code, out.strip()) == (0, "valid")
    bad = tmp_path / "corrupted.tr"
    bad.write_text(tr.read_text().replace('"rule": "incl_neg"', '"rule": "incl_pos"'))
    code, out, _ = run("check", REFL, "--trace", str(bad))
    assert code == 3 and out.startswith("invalid at node 1") and "polarity" in out


def test_check_reconstruct(tmp_path):
    tr = tmp_path / "ok.tr"
    run("prove", REFL, "--trace", str(tr))
    lines = tr.read_text().splitlines()
    rec = json.loads(lines[2])
    rec["steps"] = None
    lines[2] = json.dumps(rec, ensure_ascii=False)
    tr.write_text("\n".join(lines) + "\n")
    assert run("check", REFL, "--trace", str(tr))[0] == 3
    assert run("check", REFL, "--trace", str(tr), "--reconstruct")[:2] == (0, "valid\n")


def test_check_malformed_and_unknown_rule(tmp_path):
    t = tmp_path / "x.tr"
    t.write_text("garbage\n")
    assert run("check", REFL, "--trace", str(t))[0] == 3
    good = tmp_path / "ok.tr"
    run("prove", REFL, "--trace", str(good))
    t.write_text(good.read_text().replace('"rule": "incl_neg"', '"rule": "nope"'))
    code, out, err = run("check", REFL, "--trace", str(t))
    assert code == 3 and out.strip() == "invalid" and "nope" in err


def test_check_missing_trace():
    assert run("check", REFL, "--trace", "/nonexistent/trace")[0] == 2


def test_unprovable_exit_code():
    code, out, _ = run("prove", str(PROBLEMS / "subset_distinct.p"), "--max-gamma", "2")
    assert (code, out.strip()) == (1, "exhausted")


def test_rewrite_limit():
    code, out, err = run("prove", str(PROBLEMS / "rewrite_loop.p"), "--rewrite-budget", "50")
    assert code == 1 and out.strip() == "rewrite-limit"
    assert "rewrite budget of 50 steps exhausted on ~p(a)" in err


def test_rules_listing():
    code, out, _ = run("rules", REFL)
    assert code == 0
    assert out.splitlines() == [
        "incl_pos: +: X subset Y -> (forall z. (z in X => z in Y)) (incl)",
        "incl_neg: -: X subset Y -> (f(X, Y) in X => f(X, Y) in Y) (incl)",
    ]
    _, out, _ = run("rules", REFL, "--no-polarize")
    assert out.splitlines() == ["incl: both: X subset Y -> (forall z. (z in X => z in Y)) (incl)"]
    _, out, _ = run("rules", REFL, "--no-orient")
    assert out == ""


def test_bench_is_deterministic():
    first = run("bench", str(PROBLEMS), "--no-time")
    second = run("bench", str(PROBLEMS), "--no-time")
    assert first == second and first[0] == 0
    lines = first[1].splitlines()
    assert lines[0].split() == ["problem", "status", "check", "expansions", "closures",
                                "gamma", "nodes"]
    rows = {ln.split()[0]: ln.split() for ln in lines[1:-1]}
    assert rows["subset_refl"][1:5] == ["proved", "valid", "2", "1"]
    assert rows["rewrite_loop"][1] == "rewrite-limit"
    assert rows["subset_distinct"][1] == "exhausted"
    assert "INVALID" not in first[1]
    assert lines[-1].startswith(f"# {len(rows)} problems:")


@pytest.mark.parametrize("argv", [
    [], ["frobnicate"], ["prove"], ["prove", REFL, "--max-gamma", "0"],
    ["prove", REFL, "--timeout", "abc"], ["check", REFL], ["prove", "/nonexistent.p"],
    ["bench", "/nonexistent"],
])
def test_usage_errors(argv):
    assert run(*argv)[0] == 2


def test_parse_error_exit_code(tmp_path):
    p = tmp_path / "bad.p"
    p.write_text("goal g: p(a) &.\n")
    code, _, err = run("prove", str(p))
    assert code == 2 and "1:" in err


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "polartab.cli", "prove", REFL],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "proved\n"

"""Command line front end: ``polartab prove|check|rules|bench``."""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .errors import (
    IllFormedRule, MalformedTrace, ParseError, RewriteLimitExceeded, UnknownRule,
)
from .parser import load_problem
from .preprocess import PreprocessOptions, preprocess_problem
from .printer import show
from .proofcheck import check_proof
from .prover import Prover, SearchConfig
from .rewrite import DEFAULT_BUDGET, TermRule
from .trace import parse_trace, serialize_trace

EXIT_OK = 0
EXIT_UNPROVED = 1
EXIT_USAGE = 2
EXIT_INVALID = 3


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text}")
    return value


def _positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text}")
    return value


def _add_preprocess_flags(p):
    p.add_argument("--no-polarize", action="store_true",
                   help="only unpolarized (iff) axioms become rules, as in plain deduction modulo")
    p.add_argument("--no-skolemize-rules", action="store_true",
                   help="keep quantifiers in rule right-hand sides")
    p.add_argument("--no-orient", action="store_true",
                   help="keep every axiom as a plain assumption")


def _add_search_flags(p):
    p.add_argument("--max-gamma", type=_positive_int, default=5, metavar="N",
                   help="largest per-branch gamma limit for iterative deepening (default 5)")
    p.add_argument("--rewrite-budget", type=_positive_int, default=DEFAULT_BUDGET, metavar="N",
                   help=f"rewrite steps allowed per literal (default {DEFAULT_BUDGET})")
    p.add_argument("--timeout", type=_positive_float, default=30.0, metavar="S",
                   help="wall-clock limit in seconds (default 30)")


def _build_parser():
    parser = _ArgumentParser(prog="polartab", description=__doc__)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("prove", help="search for a proof of the goal")
    p.add_argument("file")
    _add_search_flags(p)
    _add_preprocess_flags(p)
    p.add_argument("--trace", metavar="OUT", help="write the proof trace to OUT")
    p.add_argument("--stats", action="store_true", help="print search statistics")

    c = sub.add_parser("check", help="validate a proof trace against a problem")
    c.add_argument("file")
    c.add_argument("--trace", required=True, metavar="T")
    c.add_argument("--reconstruct", action="store_true",
                   help="recover elided rewrite steps by search before checking")
    c.add_argument("--rewrite-budget", type=_positive_int, default=DEFAULT_BUDGET, metavar="N")

    r = sub.add_parser("rules", help="list the rewrite rules extracted from a problem")
    r.add_argument("file")
    _add_preprocess_flags(r)

    b = sub.add_parser("bench", help="prove every problem file in a directory")
    b.add_argument("dir")
    _add_search_flags(b)
    _add_preprocess_flags(b)
    b.add_argument("--no-time", action="store_true", help="omit the wall-time column")
    return parser


def _options(args):
    return PreprocessOptions(
        polarize=not args.no_polarize,
        skolemize=not args.no_skolemize_rules,
        orient_axioms=not args.no_orient,
    )


def _config(args):
    return SearchConfig(max_gamma=args.max_gamma, rewrite_budget=args.rewrite_budget,
                        timeout=args.timeout)


def _run_prove(path, args):
    problem = load_problem(path)
    pre = preprocess_problem(problem, _options(args))
    return problem, Prover(pre, _config(args), problem.name).run()


def cmd_prove(args, out, err):
    try:
        _, result = _run_prove(args.file, args)
    except RewriteLimitExceeded as e:
        print(f"error: {e}", file=err)
        print("rewrite-limit", file=out)
        return EXIT_UNPROVED
    print(result.status.value, file=out)
    if args.stats:
        for line in result.stats.lines(result.trace):
            print(line, file=out)
    if result.trace is not None and args.trace:
        Path(args.trace).write_text(serialize_trace(result.trace), encoding="utf-8")
    return EXIT_OK if result.proved else EXIT_UNPROVED


def cmd_check(args, out, err):
    problem = load_problem(args.file)
    try:
        text = Path(args.trace).read_text(encoding="utf-8")
    except OSError as e:
        print(f"error: cannot read trace: {e}", file=err)
        return EXIT_USAGE
    try:
        trace = parse_trace(text)
        verdict = check_proof(problem, trace, reconstruct=args.reconstruct,
                              budget=args.rewrite_budget)
    except (MalformedTrace, UnknownRule) as e:
        print("invalid", file=out)
        print(f"malformed trace: {e}", file=err)
        return EXIT_INVALID
    print(verdict, file=out)
    return EXIT_OK if verdict else EXIT_INVALID


def _polarity(rule):
    return "term" if isinstance(rule, TermRule) else str(rule.polarity)


def cmd_rules(args, out, err):
    problem = load_problem(args.file)
    pre = preprocess_problem(problem, _options(args))
    for r in pre.rules.all_rules():
        origin = pre.origins.get(r.name) or r.name
        print(f"{r.name}: {_polarity(r)}: {show(r.lhs)} -> {show(r.rhs)} ({origin})", file=out)
    return EXIT_OK


def cmd_bench(args, out, err):
    root = Path(args.dir)
    if not root.is_dir():
        print(f"error: not a directory: {root}", file=err)
        return EXIT_USAGE
    files = sorted(root.glob("*.p"))
    header = ["problem", "status", "check", "expansions", "closures", "gamma", "nodes"]
    if not args.no_time:
        header.append("time")
    rows = []
    counts = {}
    for path in files:
        t0 = time.perf_counter()
        try:
            problem, result = _run_prove(path, args)
        except RewriteLimitExceeded:
            status, verdict, row = "rewrite-limit", "-", ["-", "-", "-", "-"]
        except (ParseError, IllFormedRule) as e:
            status, verdict, row = "error", "-", ["-", "-", "-", "-"]
            print(f"{path.name}: {e}", file=err)
        else:
            status = result.status.value
            verdict = "-"
            if result.trace is not None:
                verdict = "valid" if check_proof(problem, result.trace) else "INVALID"
            tr = result.trace
            row = [str(tr.expansions()) if tr else "-", str(tr.closures()) if tr else "-",
                   str(result.stats.gamma_limit), str(result.stats.nodes_expanded)]
        counts[status] = counts.get(status, 0) + 1
        line = [path.stem, status, verdict] + row
        if not args.no_time:
            line.append(f"{time.perf_counter() - t0:.3f}")
        rows.append(line)
    widths = [max(len(x) for x in col) for col in zip(header, *rows)]
    for line in [header] + rows:
        print("  ".join(c.ljust(w) for c, w in zip(line, widths)).rstrip(), file=out)
    summary = ", ".join(f"{k}={v}" for k, v in sorted(counts.items()))
    print(f"# {len(files)} problems: {summary}", file=out)
    return EXIT_OK


_COMMANDS = {"prove": cmd_prove, "check": cmd_check, "rules": cmd_rules, "bench": cmd_bench}


def main(argv=None, out=None, err=None):
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as e:
        print(f"error: {e}", file=err)
        return EXIT_USAGE
    except SystemExit as e:  # --help
        return EXIT_OK if not e.code else EXIT_USAGE
    try:
        return _COMMANDS[args.command](args, out, err)
    except (ParseError, IllFormedRule) as e:
        print(f"error: {e}", file=err)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=err)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Compiled vs pure-Python term kernels.

Runs the same seeded workloads through ``polartab._speedups`` and
``polartab._kernels`` and prints one line per kernel with the best-of-N
time for each backend and the speedup. With ``--prove`` it also times a
full proof search over a problem directory in a subprocess per backend.

    python benchmarks/bench_kernels.py [--repeat 5] [--prove problems]
"""

import argparse
import os
import random
import subprocess
import sys
import timeit

from polartab import _kernels
from polartab.terms import App, Meta, Var

try:
    from polartab import _speedups
except ImportError:
    _speedups = None


def random_term(rng, depth, metas, variables=()):
    if depth == 0 or rng.random() < 0.3:
        pick = rng.random()
        if variables and pick < 0.3:
            return Var(rng.choice(variables))
        if metas and pick < 0.6:
            return Meta(rng.randint(1, metas))
        return App(rng.choice("abc"), [])
    sym, arity = rng.choice((("f", 1), ("g", 2), ("h", 3)))
    return App(sym, [random_term(rng, depth - 1, metas, variables) for _ in range(arity)])


def workloads(seed=7):
    rng = random.Random(seed)
    pairs = [(random_term(rng, 5, 12), random_term(rng, 5, 12)) for _ in range(400)]
    bindings = {}
    for i in range(1, 7):
        bindings[i] = random_term(rng, 2, 0)
    patterns = [random_term(rng, 4, 0, ("X", "Y", "Z")) for _ in range(200)]
    targets = [random_term(rng, 6, 4) for _ in range(200)]
    var_map = {"X": App("a", []), "Y": App("f", [Meta(3)]), "Z": Meta(9)}
    return {
        "unify": lambda k: [k.unify(a, b, bindings) for a, b in pairs],
        "resolve": lambda k: [k.resolve(a, bindings) for a, _ in pairs],
        "match": lambda k: [k.match(p, t) for p in patterns[:40] for t in targets[:40]],
        "substitute": lambda k: [k.substitute(p, var_map, bindings) for p in patterns],
        "occurs": lambda k: [k.occurs(3, b, bindings) for _, b in pairs],
    }


def bench_kernels(repeat):
    print(f"{'kernel':<12}{'python ms':>12}{'cython ms':>12}{'speedup':>10}")
    for name, fn in workloads().items():
        py = min(timeit.repeat(lambda: fn(_kernels), number=5, repeat=repeat)) * 200
        if _speedups is None:
            print(f"{name:<12}{py:>12.2f}{'n/a':>12}{'n/a':>10}")
            continue
        cy = min(timeit.repeat(lambda: fn(_speedups), number=5, repeat=repeat)) * 200
        print(f"{name:<12}{py:>12.2f}{cy:>12.2f}{py / cy:>9.1f}x")


_PROVE = """
import sys, time
from pathlib import Path
from polartab import BACKEND, PreprocessOptions, SearchConfig, load_problem, prove
t0 = time.perf_counter()
for p in sorted(Path(sys.argv[1]).glob('*.p')):
    try:
        prove(load_problem(p), SearchConfig(max_gamma=5, timeout=120),
              PreprocessOptions(orient_axioms=False))
    except Exception:
        pass
print(BACKEND, time.perf_counter() - t0)
"""


def bench_prove(directory):
    for pure in ("1", "0"):
        env = dict(os.environ, POLARTAB_PURE=pure)
        out = subprocess.run([sys.executable, "-c", _PROVE, directory], env=env,
                             capture_output=True, text=True, check=True).stdout.split()
        print(f"prove {directory} (axioms only) with {out[0]:<7} {float(out[1]):8.2f} s")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--prove", metavar="DIR")
    args = ap.parse_args(argv)
    bench_kernels(args.repeat)
    if args.prove:
        bench_prove(args.prove)


if __name__ == "__main__":
    main()

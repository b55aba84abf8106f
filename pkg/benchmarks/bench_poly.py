"""Benchmark comparing the compiled and pure-Python polynomial kernels.

Runs the workloads that dominate the package's runtime: dense products,
shift substitution, gcd, and a full relation verification.  Each timing
runs in a subprocess so the backend choice (UHFREE_PURE_PYTHON) is
fixed at import time.

Usage: python benchmarks/bench_poly.py [--repeat N]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, time
from fractions import Fraction
from uhfree import BACKEND
from uhfree.poly import Poly, ShiftMap, apply_shift, poly_gcd
from uhfree.presentation import build_mas, verify_relations

def dense(nvars, deg, seed):
    terms = {}
    state = seed
    import itertools
    for exps in itertools.product(range(deg + 1), repeat=nvars):
        if sum(exps) <= deg:
            state = (1103515245 * state + 12345) % (1 << 31)
            terms[exps] = Fraction(state % 13 - 6, 1 + state % 5)
    return Poly(nvars, terms)

def bench(fn, repeat):
    best = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best

repeat = int(__import__("sys").argv[1])
p = dense(3, 6, 1)
q = dense(3, 6, 2)
delta = ShiftMap((1, 1, 1))
results = {"backend": BACKEND}
results["mul dense deg-6"] = bench(lambda: p * q, repeat)
results["shift (p*q)"] = bench(lambda: apply_shift(delta, p * q), repeat)
a = dense(3, 2, 3)
b = dense(3, 2, 4)
c = dense(3, 2, 5)
ab, ac = a * b, a * c
results["gcd deg-4 with factor"] = bench(lambda: poly_gcd(ab, ac), repeat)
pres = build_mas(3, (1, 2, 3), (1, 3))
results["verify_relations m=3"] = bench(lambda: verify_relations(pres), repeat)
print(json.dumps(results))
"""


def run(pure: bool, repeat: int) -> dict:
    env = dict(os.environ)
    if pure:
        env["UHFREE_PURE_PYTHON"] = "1"
    else:
        env.pop("UHFREE_PURE_PYTHON", None)
    out = subprocess.run(
        [sys.executable, "-c", WORKLOAD, str(repeat)],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    return json.loads(out.stdout)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    compiled = run(pure=False, repeat=args.repeat)
    pure = run(pure=True, repeat=args.repeat)
    if compiled["backend"] == "python":
        print("compiled backend unavailable; both runs used the pure-Python kernels")
    header = f"{'workload':28s} {'pure (ms)':>12s} {compiled['backend']+' (ms)':>12s} {'speedup':>9s}"
    print(header)
    print("-" * len(header))
    for key in pure:
        if key == "backend":
            continue
        t_pure = pure[key] * 1e3
        t_comp = compiled[key] * 1e3
        ratio = t_pure / t_comp if t_comp else float("inf")
        print(f"{key:28s} {t_pure:12.3f} {t_comp:12.3f} {ratio:8.2f}x")


if __name__ == "__main__":
    main()

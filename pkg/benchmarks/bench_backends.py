#!/usr/bin/env python3
"""Benchmark the compiled kernel against the pure-Python fallback.

Each workload runs in a fresh subprocess with SPINECYCLES_BACKEND forced, so
the import-time selection path is exercised exactly as users hit it.

Usage: python benchmarks/bench_backends.py [--heavy]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import spinecycles
from spinecycles import cycles, predictor, ssgraph

p, ell, r = json.loads(sys.argv[1])
t0 = time.perf_counter()
graph = ssgraph.build_graph(p, ell)
t_build = time.perf_counter() - t0
t0 = time.perf_counter()
cen = cycles.census(graph, r)
t_cycles = time.perf_counter() - t0
print(json.dumps({
    "backend": spinecycles.BACKEND,
    "build_s": t_build,
    "cycles_s": t_cycles,
    "vertices": graph.vertex_count,
    "n_t": cen.n_t_graph,
    "n_s": cen.n_s_graph,
}))
"""


def run_case(backend, p, ell, r):
    env = dict(os.environ, SPINECYCLES_BACKEND=backend)
    out = subprocess.run(
        [sys.executable, "-c", WORKER, json.dumps([p, ell, r])],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return json.loads(out.stdout)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--heavy", action="store_true", help="add a larger prime sweep case")
    args = parser.parse_args()

    cases = [(1019, 5, 3), (3779, 2, 6), (4643, 3, 3)]
    if args.heavy:
        cases.append((20011, 3, 3))

    print(f"{'case':>16} {'backend':>9} {'build':>9} {'cycles':>9} {'(n_s,n_t)':>10} {'speedup':>8}")
    for p, ell, r in cases:
        results = {}
        for backend in ("pure", "compiled"):
            try:
                results[backend] = run_case(backend, p, ell, r)
            except subprocess.CalledProcessError as exc:
                if backend == "compiled":
                    print(f"{f'p={p} l={ell} r={r}':>16} {'compiled':>9} {'unavailable':>20}")
                    results[backend] = None
                else:
                    raise RuntimeError(exc.stderr)
        pure = results["pure"]
        comp = results.get("compiled")
        for backend, res in results.items():
            if res is None:
                continue
            total = res["build_s"] + res["cycles_s"]
            speed = ""
            if backend == "compiled" and comp:
                speed = f"{(pure['build_s'] + pure['cycles_s']) / total:.1f}x"
            case = f"p={p} l={ell} r={r}"
            counts = f"({res['n_s']},{res['n_t']})"
            print(
                f"{case:>16} {backend:>9} {res['build_s']:8.3f}s"
                f" {res['cycles_s']:8.3f}s {counts:>10} {speed:>8}"
            )
        if comp and (pure["n_s"], pure["n_t"]) != (comp["n_s"], comp["n_t"]):
            raise SystemExit(f"backend disagreement at p={p}: {pure} vs {comp}")


if __name__ == "__main__":
    main()

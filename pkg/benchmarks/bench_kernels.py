#!/usr/bin/env python3
"""Compare the compiled kernels against the pure-Python fallback.

Runs the three hot kernels (batch BFC, batch bipartite ORC, DPLL) on
identical seeded inputs with both implementations and prints a timing table.

Usage: python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

import numpy as np

from satcurv import _kernels_py, gen, graph
from satcurv.solver import _flatten

try:
    from satcurv import _kernels
except ImportError:
    _kernels = None


def timed(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def bench_curvature(impl, g, repeat):
    eu = np.ascontiguousarray(g.edges[:, 0])
    ev = np.ascontiguousarray(g.edges[:, 1]) + g.n_literals
    bfc_t, _ = timed(lambda: impl.bfc_edges(g.indptr, g.indices, eu, ev), repeat)
    orc_t, _ = timed(
        lambda: impl.orc_bipartite_edges(g.indptr, g.indices, eu, ev), repeat
    )
    return bfc_t, orc_t


def bench_dpll(impl, cnfs, repeat):
    flats = [_flatten(cnf) for cnf in cnfs]

    def run():
        return [
            impl.dpll(cnf.num_vars, flat, ptr, 10_000_000)[0]
            for cnf, (flat, ptr) in zip(cnfs, flats)
        ]

    return timed(run, repeat)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    spec = gen.GenSpec(n_vars=200, k=3, alpha=4.2, seed=0)
    g = graph.build_lcg(gen.generate(spec, rng=gen.instance_rng(0, 0)))
    cnfs = [
        gen.generate(
            gen.GenSpec(n_vars=40, k=3, alpha=4.2, seed=1),
            rng=gen.instance_rng(1, i),
        )
        for i in range(20)
    ]

    impls = [("python", _kernels_py)]
    if _kernels is not None:
        impls.append(("compiled", _kernels))
    else:
        print("compiled extension not built; benchmarking fallback only")

    rows = {}
    for name, impl in impls:
        bfc_t, orc_t = bench_curvature(impl, g, args.repeat)
        dpll_t, statuses = bench_dpll(impl, cnfs, args.repeat)
        rows[name] = (bfc_t, orc_t, dpll_t)
        print(
            f"{name:>9}: bfc {bfc_t * 1e3:8.2f} ms   "
            f"orc {orc_t * 1e3:8.2f} ms   dpll {dpll_t * 1e3:8.2f} ms"
            f"   ({statuses.count(_kernels_py.SAT)}/{len(statuses)} sat)"
        )

    if len(rows) == 2:
        py, cy = rows["python"], rows["compiled"]
        print(
            "  speedup: "
            + "   ".join(
                f"{label} {p / c:5.1f}x"
                for label, p, c in zip(("bfc", "orc", "dpll"), py, cy)
            )
        )


if __name__ == "__main__":
    main()

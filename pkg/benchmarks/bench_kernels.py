"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3] [--quick]

Each row times one kernel on the same input with both backends and checks
that the outputs agree.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from poprod import kernels
from poprod.flow import build_network, initial_flow
from poprod.harness import gen_gk, random_poset


def _best(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def _plain(out):
    if isinstance(out, tuple):
        return tuple(_plain(o) for o in out)
    return np.asarray(out).tolist() if hasattr(out, "__len__") else out


def flow_case(n, p, seed):
    net = initial_flow(build_network(random_poset(n, p, seed)))

    def run(backend):
        return lambda: backend.greedy_decompose(
            n, net.tail, net.head, net.lower.copy(), net.flow.copy(), net.elem_arc
        )[0]

    return f"greedy_decompose random:{n}:{p}", run


def interval_case(k):
    fam = gen_gk(k)

    def run(backend):
        return lambda: backend.interval_greedy(fam.lo, fam.hi)

    return f"interval_greedy gk:{k} (n={len(fam.lo)})", run


def partition_case(n, seed):
    keys = np.random.default_rng(seed).permutation(n).astype(np.int64)

    def run(backend):
        def go():
            arr = np.arange(n, dtype=np.int64)
            m = backend.partition(keys, arr, 0, n, n // 2)
            return m, arr.tolist()
        return go

    return f"partition n={n}", run


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="small inputs only")
    args = ap.parse_args(argv)
    if kernels.compiled_backend is None:
        print("compiled backend unavailable; build the extension first")
        return 1
    if args.quick:
        cases = [flow_case(60, 0.1, 1), interval_case(8), partition_case(10 ** 5, 0)]
    else:
        cases = [flow_case(150, 0.05, 1), flow_case(300, 0.02, 2), interval_case(12),
                 interval_case(15), partition_case(10 ** 6, 0)]
    print(f"{'kernel':<42} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for name, run in cases:
        tp, outp = _best(run(kernels.python_backend), args.repeat)
        tc, outc = _best(run(kernels.compiled_backend), args.repeat)
        flag = "" if _plain(outp) == _plain(outc) else "  OUTPUT MISMATCH"
        print(f"{name:<42} {tp:>10.4f} {tc:>10.4f} {tp / tc:>7.1f}x{flag}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

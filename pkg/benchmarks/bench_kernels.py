"""Compiled vs pure-Python kernel timings.

Usage: python benchmarks/bench_kernels.py [--repeat R]

Prints one line per kernel with the best-of-R time for each available
backend and the speedup.  Both backends must return identical results; a
mismatch aborts the run.
"""
import argparse
import time

import numpy as np

from walshnet import _backend
from walshnet.f2net import enumerate_points, generator_rows
from walshnet.search import random_net, search_low_wafom
from walshnet.tvalue import strict_t_rank
from walshnet.wafom import chunk_tables, digit_ratios


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases():
    net = random_net(4, 30, 16, 1)
    pts = enumerate_points(net)
    tables = chunk_tables(30, digit_ratios(30))
    shift = tables.shape[0] * 8 - 30
    cols = generator_rows(net).reshape(-1)
    weights = np.tile(digit_ratios(30), 4)
    tnet = random_net(4, 32, 12, 2)
    trows = generator_rows(tnet, 12)
    return {
        "gray_points d=16 s=4": lambda k: k.gray_points(net.basis_array),
        "product_terms N=2^16": lambda k: k.product_terms(pts, tables, shift, 8),
        "syndrome_sum d=16 sn=120": lambda k: k.syndrome_sum(cols, weights, 16),
        "min_dependent s=4 m=12": lambda k: k.min_dependent(trows, 12),
    }


def end_to_end(repeat):
    rows = []
    for name in _backend.available():
        prev = _backend.set_backend(name)
        try:
            t_search, _ = best_of(lambda: search_low_wafom(4, 30, 10, trials=200, keep_k=10), repeat)
            nets = [random_net(4, 32, 12, i) for i in range(200)]
            t_tval, _ = best_of(lambda: [strict_t_rank(n) for n in nets], repeat)
        finally:
            _backend.set_backend(prev)
        rows.append((name, t_search, t_tval))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = {name: _backend._BACKENDS[name] for name in _backend.available()}
    print(f"backends: {', '.join(backends)}")
    for label, fn in cases().items():
        times, outs = {}, {}
        for name, mod in backends.items():
            times[name], outs[name] = best_of(lambda: fn(mod), args.repeat)
        ref = outs["python"]
        for name, out in outs.items():
            same = all(np.array_equal(a, b) for a, b in zip(out, ref)) if isinstance(ref, tuple) \
                else np.array_equal(out, ref)
            if not same:
                raise SystemExit(f"{label}: backend {name} disagrees with python")
        line = "  ".join(f"{n} {t * 1e3:9.2f} ms" for n, t in times.items())
        if "compiled" in times:
            line += f"  speedup {times['python'] / times['compiled']:6.1f}x"
        print(f"{label:28s} {line}")
    print()
    for name, t_search, t_tval in end_to_end(args.repeat):
        print(f"{name:9s} search 200 nets d=10: {t_search:6.3f} s   t-value 200 nets m=12: {t_tval:6.3f} s")


if __name__ == "__main__":
    main()

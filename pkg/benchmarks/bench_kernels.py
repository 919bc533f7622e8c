"""Wall-clock comparison of the compiled kernels against the pure-Python ones.

    python benchmarks/bench_kernels.py [--repeat 3] [--seed 0]

Both backends get identical inputs and their outputs are compared before any
timing is reported.
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time

from f5lab import _pycore
from f5lab.random_model import derive_seed, sample_g3
from f5lab.solver import conflict_triples

try:
    from f5lab import _core
except ImportError:
    _core = None

BNB_CASES = [(9, 0.4), (10, 0.3), (11, 0.25), (12, 0.2)]
PARTITION_CASES = [(9, 0.5), (10, 0.5), (11, 0.5), (12, 0.4)]
INSTANCES = 4


def _time(fn, repeat):
    best = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best.append(time.perf_counter() - t0)
    return min(best), out


def bench_bnb(mod, hosts, repeat):
    def go():
        return [mod.max_free_bnb(len(g), cp, 0, True, 10**6, 10**8) for g, cp in hosts]

    return _time(go, repeat)


def bench_partition(mod, hosts, repeat):
    def go():
        return [mod.best_partition(g.n, g.edges, 10**9) for g in hosts]

    return _time(go, repeat)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if _core is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation` first")
        return 1

    rows = []
    for n, p in BNB_CASES:
        gs = [sample_g3(n, p, derive_seed(args.seed, n, k)) for k in range(INSTANCES)]
        hosts = [(g, conflict_triples(g)) for g in gs]
        tc, oc = bench_bnb(_core, hosts, args.repeat)
        tp, op = bench_bnb(_pycore, hosts, 1)
        assert oc == op, "backends disagree on max_free_bnb"
        edges = statistics.mean(len(g) for g in gs)
        rows.append((f"max_free_bnb n={n} p={p} (~{edges:.0f} edges)", tp, tc))
    for n, p in PARTITION_CASES:
        gs = [sample_g3(n, p, derive_seed(args.seed, n, k, 1)) for k in range(INSTANCES)]
        tc, oc = bench_partition(_core, gs, args.repeat)
        tp, op = bench_partition(_pycore, gs, 1)
        assert oc == op, "backends disagree on best_partition"
        rows.append((f"best_partition n={n} p={p}", tp, tc))

    w = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{w}}  {'python s':>10}  {'compiled s':>10}  {'speedup':>8}")
    for name, tp, tc in rows:
        print(f"{name:<{w}}  {tp:10.4f}  {tc:10.4f}  {tp / tc:7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())

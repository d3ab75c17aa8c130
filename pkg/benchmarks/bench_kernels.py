"""Compare the numba kernels against the pure-numpy fallbacks.

Usage: python3 benchmarks/bench_kernels.py [--trials 20000]
"""

import argparse
import time

import numpy as np

from gtcodes import backend, codes
from gtcodes.field import build_field_cached


def timed(fn, *args, repeat=3):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_gv(impl):
    f = build_field_cached(16)
    saved = backend.gv_greedy_fill
    backend.gv_greedy_fill = impl.gv_greedy_fill
    try:
        return timed(codes.gv_construct, f, 40, 28, repeat=1)
    finally:
        backend.gv_greedy_fill = saved


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--trials", type=int, default=20000)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    packed = rng.integers(0, 1 << 63, size=(2048, 16),
                          dtype=np.int64).astype(np.uint64)

    impls = {name: backend.get_backend(name) for name in ("numpy", "numba")}
    # trigger jit compilation outside the timed region
    impls["numba"].pairwise_stats(packed[:4])
    impls["numba"].experiment_trials(packed[:4], 1, 2, 0, 2, 0)

    rows = []
    for name, impl in impls.items():
        t_pair, _ = timed(impl.pairwise_stats, packed[:512])
        t_sim, _ = timed(lambda: impl.experiment_trials(
            packed, 16, args.trials, 1, 2, 0))
        t_gv, _ = bench_gv(impl)
        rows.append((name, t_pair, t_sim, t_gv))

    print(f"{'backend':>8} {'pairwise_stats':>15} {'experiment':>12} {'gv_fill':>10}")
    for name, t_pair, t_sim, t_gv in rows:
        print(f"{name:>8} {t_pair * 1e3:>13.1f}ms {t_sim * 1e3:>10.1f}ms "
              f"{t_gv * 1e3:>8.1f}ms")
    base = rows[0]
    fast = rows[1]
    print(f"speedup: pairwise {base[1] / fast[1]:.1f}x, "
          f"experiment {base[2] / fast[2]:.1f}x, gv {base[3] / fast[3]:.1f}x")


if __name__ == "__main__":
    main()

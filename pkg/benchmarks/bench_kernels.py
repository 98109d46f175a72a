"""Compare the numba and pure-numpy kernel paths.

    python benchmarks/bench_kernels.py [--repeat 3]

Both backends are imported directly, so the env flag is irrelevant here.
Outputs are checked for equality before timings are reported.
"""

import argparse
import time

import numpy as np

from compcause.kernels import numba_backend, numpy_backend


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if numba_backend is None:
        raise SystemExit("numba path disabled; unset COMPCAUSE_DISABLE_NUMBA / NUMBA_DISABLE_JIT")
    rng = np.random.default_rng(0)

    # JIT warm-up outside the timed region.
    numba_backend.nsrps_run(np.array([0, 1, 0]), 2)
    numba_backend.te_nats(np.array([0, 1, 0, 1]), np.array([1, 0, 0, 1]), 1, 1, 2, 2)

    cases = []
    for n in (48, 500, 2000, 5000):
        seq = rng.integers(0, 3, n)
        cases.append((f"etc  L={n}", lambda f, s=seq: f.nsrps_run(s, 3)[0]))
    for n, lag in ((10_000, 1), (100_000, 2), (100_000, 8)):
        x, y = rng.integers(0, 3, n), rng.integers(0, 3, n)
        cases.append((f"te   L={n} s=t={lag}", lambda f, x=x, y=y, lag=lag: f.te_nats(x, y, lag, lag, 3, 3)))
    batch = [rng.integers(0, 9, 48) for _ in range(2000)]
    cases.append(("etc  2000 x L=48 (search-like)", lambda f: sum(int(f.nsrps_run(s, 9)[0]) for s in batch)))

    print(f"{'case':<34}{'numpy [s]':>12}{'numba [s]':>12}{'speedup':>10}")
    for name, fn in cases:
        t_np, a = best_of(lambda: fn(numpy_backend), args.repeat)
        t_nb, b = best_of(lambda: fn(numba_backend), args.repeat)
        assert np.isclose(a, b, rtol=0, atol=1e-12), (name, a, b)
        print(f"{name:<34}{t_np:>12.4f}{t_nb:>12.4f}{t_np / t_nb:>10.1f}x")


if __name__ == "__main__":
    main()

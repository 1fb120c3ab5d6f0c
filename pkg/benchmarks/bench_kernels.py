"""Benchmark the JIT kernels against the pure-numpy fallback.

Times the three hot kernels on realistic problem sizes and a full
Monte-Carlo trial under the selected backend.  Run from the repo root:

    python benchmarks/bench_kernels.py
    CFRIS_NO_NUMBA=1 python benchmarks/bench_kernels.py   # numpy-only trial

The kernel comparison below always covers both flavors when numba is
installed, regardless of the environment flag.
"""
import time

import numpy as np

from cfris import SimConfig, run_trial
from cfris import _kernels


def _problem(rng, m=20, k=5, n=60):
    h = rng.normal(size=(m, k)) + 1j * rng.normal(size=(m, k))
    H = rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n))
    hru = rng.normal(size=(n, k)) + 1j * rng.normal(size=(n, k))
    v = np.exp(1j * rng.uniform(0, 2 * np.pi, n))
    eta = rng.uniform(0.0, 2.0, size=(m, k))
    g = _kernels.aggregate_numpy(h, H, v, hru)
    return h, H, hru, v, eta, g


def _time(fn, args, repeat=5000):
    fn(*args)  # warmup / JIT compile
    start = time.perf_counter()
    for _ in range(repeat):
        fn(*args)
    return (time.perf_counter() - start) / repeat


def bench_kernels():
    rng = np.random.default_rng(0)
    h, H, hru, v, eta, g = _problem(rng)
    w = np.conj(g)
    cases = [
        ("aggregate", _kernels.aggregate_numpy, _kernels.aggregate_jit,
         (h, H, v, hru)),
        ("align_phases", _kernels.align_phases_numpy,
         _kernels.align_phases_jit, (H, hru[:, 0], h[:, 0])),
        ("sinr_users", _kernels.sinr_users_numpy, _kernels.sinr_users_jit,
         (g, w, eta, 1e-3)),
    ]
    print(f"{'kernel':<14} {'numpy':>12} {'numba':>12} {'speedup':>9}")
    for name, fn_np, fn_jit, args in cases:
        t_np = _time(fn_np, args)
        if fn_jit is None:
            print(f"{name:<14} {t_np * 1e6:>10.1f}us {'n/a':>12} {'n/a':>9}")
            continue
        t_jit = _time(fn_jit, args)
        print(f"{name:<14} {t_np * 1e6:>10.1f}us {t_jit * 1e6:>10.1f}us "
              f"{t_np / t_jit:>8.1f}x")


def bench_trial(repeat=300):
    cfg = SimConfig(n_ris=60)
    run_trial(cfg, 0)  # warmup
    start = time.perf_counter()
    for i in range(repeat):
        run_trial(cfg, i)
    per_trial = (time.perf_counter() - start) / repeat
    print(f"\nfull trial (M=20, U=4, N=60), {_kernels.backend()} backend: "
          f"{per_trial * 1e3:.2f} ms/trial")


if __name__ == "__main__":
    print(f"selected backend: {_kernels.backend()} "
          f"(numba available: {_kernels.HAVE_NUMBA})\n")
    bench_kernels()
    bench_trial()

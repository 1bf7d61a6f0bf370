"""Benchmark the hot kernels: numba @njit loops vs the numpy fallbacks.

Run:  python3 benchmarks/bench_kernels.py [--repeats 5]

Builds both implementations explicitly (independent of HIVECURVE_NO_NUMBA)
so a single run reports the comparison table.
"""

import argparse
import time

import numpy as np

from hivecurve import _kernels
from hivecurve._backend import HAS_NUMBA, backend_name
from hivecurve.hive import index_set


def timeit(fn, *args, repeats=5):
    fn(*args)  # warmup (and JIT compile)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def make_pairs():
    pairs = {}
    if HAS_NUMBA:
        import numba
        jit = lambda f: numba.njit(cache=True)(f)  # noqa: E731
        pairs["restrict_lines"] = (jit(_kernels._restrict_lines_loop),
                                   _kernels._restrict_lines_numpy)
        pairs["polyroots_batch"] = (jit(_kernels._polyroots_batch_loop),
                                    _kernels._polyroots_batch_numpy)
        pairs["jacobi_hermitian"] = (jit(_kernels._jacobi_hermitian_loop),
                                     _kernels._jacobi_hermitian_loop)
    else:
        pairs["restrict_lines"] = (None, _kernels._restrict_lines_numpy)
        pairs["polyroots_batch"] = (None, _kernels._polyroots_batch_numpy)
        pairs["jacobi_hermitian"] = (None, _kernels._jacobi_hermitian_loop)
    return pairs


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--probes", type=int, default=4000)
    parser.add_argument("--degree", type=int, default=4)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    n = args.degree
    idxs = index_set(n)
    coeffs = rng.uniform(0.5, 2.0, len(idxs))
    exps = np.array(idxs, dtype=np.int64)
    base = np.ones(3)
    dirs = rng.normal(size=(args.probes, 3))
    binom = _kernels.binomial_table(n)
    rows = _kernels._restrict_lines_numpy(coeffs, exps, base, dirs, binom)

    herms = []
    for _ in range(400):
        z = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        herms.append((z + z.conj().T).astype(np.complex128))

    def jacobi_all(impl):
        def run():
            for h in herms:
                impl(h.copy(), 1e-12, 60)
        return run

    pairs = make_pairs()
    print(f"active package backend: {backend_name()}   (numba available: {HAS_NUMBA})")
    print(f"{'kernel':<22}{'numba (s)':>12}{'numpy (s)':>12}{'speedup':>10}")
    cases = {
        "restrict_lines": lambda impl: (lambda: impl(coeffs, exps, base, dirs, binom)),
        "polyroots_batch": lambda impl: (lambda: impl(rows)),
        "jacobi_hermitian": jacobi_all,
    }
    for name, (nb, npy) in pairs.items():
        t_np = timeit(cases[name](npy), repeats=args.repeats)
        if nb is None:
            print(f"{name:<22}{'-':>12}{t_np:>12.4f}{'-':>10}")
            continue
        t_nb = timeit(cases[name](nb), repeats=args.repeats)
        print(f"{name:<22}{t_nb:>12.4f}{t_np:>12.4f}{t_np / t_nb:>10.2f}x")


if __name__ == "__main__":
    main()

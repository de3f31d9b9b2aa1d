"""Time the numba kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Prints the best-of-N time per kernel and backend, plus one end-to-end
clustering run per backend. Compilation happens in a warm-up call and is
not timed.
"""

import argparse
import time

import numpy as np

from varclust import _kernels
from varclust.assignment import basis_stack
from varclust.datagen import SimConfig, generate
from varclust.engine import EngineConfig, run_multi
from varclust.linalg import covariance_spectrum, principal_factors


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def cases(rng):
    labels = rng.integers(0, 10, size=(2, 3000)).astype(np.int64)
    X = rng.standard_normal((200, 1000))
    bases = basis_stack([principal_factors(X[:, i * 100:(i + 1) * 100], 4) for i in range(10)])
    eigs = covariance_spectrum(rng.standard_normal((500, 200))).eigenvalues
    ds = generate(SimConfig(100, 300, 5, 3, seed=0))
    return {
        "pair_counts p=3000": lambda: _kernels.pair_counts(labels[0], labels[1]),
        "rss_matrix 200x1000, K=10": lambda: _kernels.rss_matrix(X, bases),
        "pesel_profile P=200": lambda: _kernels.pesel_profile(eigs, 500.0, 200, 200, 1e-12),
        "run_multi p=300 runs=3": lambda: run_multi(ds.X, 5, EngineConfig(d_max=3, runs=3, threads=1)),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    benches = cases(np.random.default_rng(0))
    print(f"{'kernel':<28}{'numpy [ms]':>12}{'numba [ms]':>12}{'speed-up':>10}")
    for name, fn in benches.items():
        res = {}
        for backend in ("numpy", "numba"):
            previous = _kernels.set_backend(backend)
            res[backend] = best_of(fn, args.repeat) * 1e3
            _kernels.set_backend(previous)
        print(f"{name:<28}{res['numpy']:>12.2f}{res['numba']:>12.2f}{res['numpy'] / res['numba']:>10.1f}")


if __name__ == "__main__":
    main()

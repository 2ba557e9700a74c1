"""Time the numba kernels against their numpy twins.

Usage::

    python benchmarks/bench_backends.py [--n 200 400 800] [--B 300] [--repeat 5]

Each kernel runs once untimed per backend (so numba compilation is excluded)
and then ``--repeat`` times; the best wall time is reported.
"""

import argparse
import os
import time

import numpy as np

from odsup import EXPNEG, BootstrapConfig, ObservationSet, iid_test, lag_sums
from odsup._accel import ENV_FLAG, NUMBA_AVAILABLE
from odsup.bootstrap import multipliers, replicate_statistics
from odsup.hajek import JackknifeTerms


def best_time(func, repeat):
    func()
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        func()
        times.append(time.perf_counter() - start)
    return min(times)


def run_backend(disable, n, B, repeat):
    os.environ[ENV_FLAG] = "1" if disable else "0"
    gen = np.random.default_rng(0)
    obs = ObservationSet.from_vectors(gen.normal(size=(n, 5)))
    terms = JackknifeTerms(a=gen.normal(size=n))
    eps = multipliers(0, B, n)
    cfg = BootstrapConfig(B=B)
    return {
        "lag_sums": best_time(lambda: lag_sums(EXPNEG, obs), repeat),
        "bootstrap_fast": best_time(lambda: replicate_statistics(eps, terms, "fast"), repeat),
        "iid_test": best_time(lambda: iid_test(obs, EXPNEG, cfg), repeat),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, nargs="+", default=[200, 400, 800])
    parser.add_argument("--B", type=int, default=300)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if not NUMBA_AVAILABLE:
        raise SystemExit("numba is not installed; nothing to compare")
    print(f"{'n':>6} {'kernel':<16} {'numba ms':>10} {'numpy ms':>10} {'speedup':>8}")
    for n in args.n:
        fast = run_backend(False, n, args.B, args.repeat)
        slow = run_backend(True, n, args.B, args.repeat)
        for name in fast:
            print(f"{n:>6} {name:<16} {1e3 * fast[name]:>10.2f} {1e3 * slow[name]:>10.2f} "
                  f"{slow[name] / fast[name]:>7.1f}x")
    os.environ.pop(ENV_FLAG, None)


if __name__ == "__main__":
    main()

"""Benchmark the compiled kernels against the numpy fallback.

Times the two hot paths (the Lindblad right-hand side and the measurement
grid behind the classical-correlation optimisation) plus one end-to-end
trajectory, each with the Cython extension and with the pure-Python
fallback, and prints a speedup table.

Usage::

    python3 benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from dotcavity import _kernels
from dotcavity._kernels import fallback
from dotcavity.dynamics import build_plan, integrate
from dotcavity.hilbert import make_space
from dotcavity.model import PulseParams, SystemParams
from dotcavity.scenarios import initial_state


def best_of(repeats, fn, *args):
    """Best wall time over ``repeats`` calls, in seconds."""
    best = float("inf")
    for _ in range(repeats):
        started = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - started)
    return best


def bench_rhs(n_max, inner, repeats):
    space = make_space(n_max)
    params = SystemParams(g_over_2pi=10.0, kappa_over_2pi=5.0,
                          gamma_over_2pi=0.025, forster_over_2pi=15.0,
                          n_max=n_max,
                          pulse=PulseParams(p0_over_2pi=1.0, tau_p=10.0, t0=60.0))
    rng = np.random.default_rng(7)
    m = rng.normal(size=(space.dim, space.dim)) \
        + 1j * rng.normal(size=(space.dim, space.dim))
    rho = m @ m.conj().T
    rho /= np.trace(rho).real
    out = np.empty_like(rho)

    def run(plan):
        for _ in range(inner):
            plan.apply(rho, 0.3, out=out)

    fast = best_of(repeats, run, build_plan(space, params)) / inner
    slow = best_of(repeats, run, build_plan(space, params, force_python=True)) / inner
    return fast, slow


def bench_grid(repeats):
    rng = np.random.default_rng(11)
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = m @ m.conj().T
    rho /= np.trace(rho).real
    thetas = np.linspace(0.0, np.pi, 64)
    phis = np.linspace(0.0, 2.0 * np.pi, 128, endpoint=False)
    fast = best_of(repeats, _kernels.conditional_entropy_grid, rho, thetas, phis)
    slow = best_of(repeats, fallback.conditional_entropy_grid, rho, thetas, phis)
    return fast, slow


def bench_trajectory(repeats):
    space = make_space(5)
    params = SystemParams(g_over_2pi=10.0, kappa_over_2pi=5.0,
                          gamma_over_2pi=0.025, forster_over_2pi=15.0, n_max=5)
    rho0 = initial_state(space, "symmetric")

    def run(force):
        integrate(space, params, rho0, (0.0, 150.0), 0.5,
                  force_python_kernels=force)

    fast = best_of(repeats, run, False)
    slow = best_of(repeats, run, True)
    return fast, slow


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5,
                        help="timing repetitions per case (best is kept)")
    args = parser.parse_args()

    if not _kernels.COMPILED:
        print("compiled extension unavailable; timings below use the "
              "fallback for both columns")

    rows = [
        ("rhs 4x4 (n_max=3, dim 16)", *bench_rhs(3, 200, args.repeats)),
        ("rhs 4x10 (n_max=9, dim 40)", *bench_rhs(9, 100, args.repeats)),
        ("discord grid 64x128", *bench_grid(args.repeats)),
        ("trajectory 150 ps (dim 24)", *bench_trajectory(max(1, args.repeats // 2))),
    ]

    width = max(len(r[0]) for r in rows)
    print(f"{'case':<{width}}  {'compiled':>10}  {'python':>10}  {'speedup':>8}")
    for name, fast, slow in rows:
        print(f"{name:<{width}}  {fast * 1e3:>8.3f}ms  {slow * 1e3:>8.3f}ms  "
              f"{slow / fast:>7.1f}x")


if __name__ == "__main__":
    main()

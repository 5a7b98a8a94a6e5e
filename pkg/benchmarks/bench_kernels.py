"""Timing comparison of the kernel backends.

Runs the pure-state and density-matrix step kernels for every available
backend on identical inputs and prints a small table:

    python3 benchmarks/bench_kernels.py --steps 200 --half-width 200
"""

import argparse
import math
import time

import numpy as np

from ewalk import kernels


def bench_pure(module, L, steps):
    rng = np.random.default_rng(1)
    up = rng.normal(size=L) + 1j * rng.normal(size=L)
    down = rng.normal(size=L) + 1j * rng.normal(size=L)
    up[0] = down[0] = up[-1] = down[-1] = 0.0
    n = np.sqrt(np.sum(np.abs(up) ** 2 + np.abs(down) ** 2))
    up, down = up / n, down / n
    field = np.exp(1j * 0.77 * np.arange(L, dtype=float))
    c, s = math.cos(math.pi / 4), math.sin(math.pi / 4)

    start = time.perf_counter()
    for _ in range(steps):
        # clamp the edges each step so support never overflows the window
        nxt_up, nxt_down = module.walk_step_pure(up, down, c, s, field)
        up = np.asarray(nxt_up)
        down = np.asarray(nxt_down)
        up[0] = down[0] = up[-1] = down[-1] = 0.0
        renorm = np.sqrt(np.sum(np.abs(up) ** 2 + np.abs(down) ** 2))
        up /= renorm
        down /= renorm
    return time.perf_counter() - start


def bench_density(module, L, steps):
    rng = np.random.default_rng(2)
    psi = rng.normal(size=2 * L) + 1j * rng.normal(size=2 * L)
    psi[:2] = psi[-2:] = 0.0
    psi /= np.sqrt(np.sum(np.abs(psi) ** 2))
    rho = np.ascontiguousarray(np.outer(psi, psi.conj()))
    field = np.exp(1j * 0.77 * np.arange(L, dtype=float))
    c, s = math.cos(math.pi / 4), math.sin(math.pi / 4)

    start = time.perf_counter()
    for _ in range(steps):
        rho = np.asarray(module.walk_step_density(rho, c, s, field, 0.9))
        rho[:2, :] = rho[-2:, :] = 0.0
        rho[:, :2] = rho[:, -2:] = 0.0
        tr = np.trace(rho).real
        if tr > 0.0:
            rho = np.ascontiguousarray(rho / tr)
    return time.perf_counter() - start


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps", type=int, default=200, help="kernel invocations per case")
    parser.add_argument("--half-width", type=int, default=200, help="lattice half width")
    parser.add_argument("--density-half-width", type=int, default=60,
                        help="lattice half width for the density case")
    args = parser.parse_args()

    L = 2 * args.half_width + 1
    Ld = 2 * args.density_half_width + 1
    backends = kernels.available_backends()
    print(f"backends: {', '.join(name for name, _ in backends)} (active: {kernels.BACKEND})")
    print(f"pure state: {args.steps} steps on {L} sites; "
          f"density: {args.steps} steps on {Ld} sites ({2 * Ld}x{2 * Ld} matrix)\n")

    results = {}
    for name, module in backends:
        results[name] = (
            bench_pure(module, L, args.steps),
            bench_density(module, Ld, args.steps),
        )

    header = f"{'backend':<14} {'pure [ms/step]':>16} {'density [ms/step]':>19}"
    print(header)
    print("-" * len(header))
    for name, (tp, td) in results.items():
        print(f"{name:<14} {1e3 * tp / args.steps:>16.4f} {1e3 * td / args.steps:>19.4f}")

    if len(results) == 2 and "numpy" in results:
        other = next(name for name in results if name != "numpy")
        tp_ratio = results["numpy"][0] / results[other][0]
        td_ratio = results["numpy"][1] / results[other][1]
        print(f"\nnumpy / {other}: pure {tp_ratio:.2f}x, density {td_ratio:.2f}x")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Each workload runs on both backends; the report is CSV on stdout
(kernel,backend,best_ms,speedup_vs_numpy). Run from the repo root:

    python3 benchmarks/compare_backends.py [--repeats 5]
"""

import argparse
import time

import numpy as np

import qunip
from qunip import HADAMARD, backend, kernels
from qunip.circuits import uniform_superposition
from qunip.interference import amplitude_bruteforce, amplitude_imbedded, random_lattice
from qunip.statevec import apply_controlled, apply_single


def best_ms(fn, repeats):
    fn()  # warm (jit compile on the numba path)
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best * 1e3


def workloads():
    state = uniform_superposition(18)
    oracle_state = uniform_superposition(20)
    rng = np.random.default_rng(0)
    deep = random_lattice([8] * 50_000, rng)
    wide = random_lattice([4] * 10, rng)  # ~1e6 paths

    return [
        ("hadamard_layer_d18", lambda: [apply_single(state, q, HADAMARD) for q in (1, 9, 18)]),
        ("ccx_d18", lambda: apply_controlled(state, [1, 2], 18, qunip.PAULI_X)),
        ("parity_oracle_d20", lambda: kernels.parity_phase_flip(oracle_state.amps, 20, 0b10110111001011011100)),
        ("imbedded_b50000_n8", lambda: amplitude_imbedded(deep)),
        ("bruteforce_1e6_paths", lambda: amplitude_bruteforce(wide)),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    if not backend.numba_available():
        raise SystemExit("numba is not importable; nothing to compare")

    results = {}
    for name in ("numpy", "numba"):
        qunip.set_backend(name)
        for label, fn in workloads():
            results[(label, name)] = best_ms(fn, args.repeats)

    print("kernel,backend,best_ms,speedup_vs_numpy")
    for label, _ in workloads():
        base = results[(label, "numpy")]
        for name in ("numpy", "numba"):
            ms = results[(label, name)]
            print(f"{label},{name},{ms:.3f},{base / ms:.2f}")


if __name__ == "__main__":
    main()

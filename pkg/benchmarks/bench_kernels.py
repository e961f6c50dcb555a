"""Numba against pure numpy on the three hot kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each kernel runs once per backend to warm up (numba compiles on first call),
then the best of ``--repeat`` timed runs is reported. Outputs of the two
backends are compared so a speedup never hides a wrong answer.
"""

import argparse
import time

import numpy as np

from pcspkit import kernels
from pcspkit.boolean_core import choice_indices, make_relation, st_left
from pcspkit.minions import st_generator, wp_generator
from pcspkit.threshold import truth_table


def _cases():
    wp4 = truth_table(wp_generator(4))
    gen3 = truth_table(st_generator(3))
    rel = st_left().relations[0]
    idx = choice_indices(rel, 4)
    tables = np.array([[(c >> y) & 1 for y in range(16)] for c in range(1 << 16)], dtype=np.uint8)
    accept = make_relation("nae", 6).accept_mask()
    return {
        "first_symmetric_map wp(4) -> 5": lambda: kernels.first_symmetric_map(wp4.table, 9, 5),
        "all_minor_codes gen(3) -> 5": lambda: kernels.all_minor_codes(gen3.table, 7, 5),
        "polymorphism_batch 2^16 tables, R^4": lambda: kernels.polymorphism_batch(tables, idx, accept),
    }


def _best(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if not kernels.HAS_NUMBA:
        print("numba is not importable; only the numpy backend can run")
        return
    previous = kernels.BACKEND
    print(f"{'kernel':40s} {'numpy s':>9s} {'numba s':>9s} {'speedup':>8s}")
    try:
        for name, fn in _cases().items():
            timings, outputs = {}, {}
            for backend in ("numpy", "numba"):
                kernels.set_backend(backend)
                fn()
                timings[backend], outputs[backend] = _best(fn, args.repeat)
            if not np.array_equal(np.asarray(outputs["numpy"]), np.asarray(outputs["numba"])):
                raise SystemExit(f"{name}: backends disagree")
            speedup = timings["numpy"] / timings["numba"]
            print(f"{name:40s} {timings['numpy']:9.4f} {timings['numba']:9.4f} {speedup:7.1f}x")
    finally:
        kernels.set_backend(previous)


if __name__ == "__main__":
    main()

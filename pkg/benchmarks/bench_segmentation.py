"""Benchmark: compiled vs. pure-Python segmentation kernel.

Builds a synthetic noisy room scan at a few mesh densities, runs the
full super-pixelation through each kernel, verifies the labelings are
bit-identical, and prints the timings.

Usage: python3 benchmarks/bench_segmentation.py
"""

import math
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from room_fixture import room_mesh  # noqa: E402
from simkit.mesh import (  # noqa: E402
    HAVE_COMPILED_KERNEL,
    SegmentationParams,
    superpixelate,
)


def bench(mesh, params, use_compiled, repeats=3):
    best = math.inf
    labels = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        labels = superpixelate(mesh, params, use_compiled=use_compiled)
        best = min(best, time.perf_counter() - t0)
    return labels, best


def main():
    if not HAVE_COMPILED_KERNEL:
        print("compiled kernel not built; nothing to compare")
        return 1
    params = SegmentationParams(k=0.05, min_size=10)
    print(f"{'faces':>8} {'pure (ms)':>12} {'compiled (ms)':>14} {'speedup':>9}")
    for step in (0.25, 0.1, 0.05):
        mesh = room_mesh(step=step, noise_sigma=0.01, seed=0)
        pure_labels, t_pure = bench(mesh, params, use_compiled=False)
        fast_labels, t_fast = bench(mesh, params, use_compiled=True)
        assert np.array_equal(pure_labels, fast_labels), "kernels disagree"
        print(
            f"{mesh.n_faces:>8} {t_pure * 1e3:>12.2f} {t_fast * 1e3:>14.2f}"
            f" {t_pure / t_fast:>8.1f}x"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Time the compiled kernels against the pure-Python fallback.

Two workloads, matching how the package actually uses the kernels:

* adjacency matvec on a large branching annulus (clique blocks in play) and
  on a tessellation patch (plain CSR),
* connected-subset enumeration for Cheeger witnesses on a patch.

Run from the repository root:

    python benchmarks/bench_kernels.py [--repeat 200] [--max-size 8]
"""

import argparse
import importlib
import time

import numpy as np

from spectre.generators import BranchingParams, TessellationParams, branching_graph, tessellation_patch
from spectre.operators import assemble, dirichlet_annulus

from spectre import _accel_py

try:
    _accel = importlib.import_module("spectre._accel")
except ImportError:
    _accel = None


def time_matvec(impl, struct, x, repeat):
    out = np.empty(struct.size)
    impl.adj_matvec(
        struct.indptr, struct.indices, struct.block_offsets, struct.block_members, x, out
    )  # warm up
    start = time.perf_counter()
    for _ in range(repeat):
        impl.adj_matvec(
            struct.indptr, struct.indices, struct.block_offsets, struct.block_members, x, out
        )
    return (time.perf_counter() - start) / repeat


def time_enumeration(impl, indptr, indices, allowed, max_size, repeat):
    start = time.perf_counter()
    for _ in range(repeat):
        result = impl.min_ratio_connected(indptr, indices, allowed, max_size)
    return (time.perf_counter() - start) / repeat, result


def row(label, python_time, cython_time):
    if cython_time is None:
        print(f"{label:<42} {python_time * 1e6:>12.1f}          (fallback only)")
    else:
        speedup = python_time / cython_time if cython_time else float("inf")
        print(
            f"{label:<42} {python_time * 1e6:>12.1f} {cython_time * 1e6:>12.1f} {speedup:>9.1f}x"
        )


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=200, help="matvec repetitions")
    parser.add_argument(
        "--enum-repeat", type=int, default=5, help="enumeration repetitions"
    )
    parser.add_argument(
        "--max-size", type=int, default=8, help="witness size cap for the enumeration"
    )
    args = parser.parse_args()

    rng = np.random.default_rng(1)
    if _accel is None:
        print("compiled extension not importable; timing the fallback alone")

    print(f"{'workload':<42} {'python us':>12} {'cython us':>12} {'speedup':>10}")

    annulus = dirichlet_annulus(
        branching_graph(BranchingParams("1/2", 1, 7), extend_stubs=True), 2, 7, "delta"
    )
    x = rng.standard_normal(annulus.dimension)
    label = f"matvec, branching annulus (n={annulus.dimension})"
    py = time_matvec(_accel_py, annulus.struct, x, args.repeat)
    cy = time_matvec(_accel, annulus.struct, x, args.repeat) if _accel else None
    row(label, py, cy)

    patch = tessellation_patch(TessellationParams(3, 7, 5))
    rim = [v for v in range(patch.vertex_count) if not patch.is_interior(v)]
    hat = assemble(patch, "delta_hat", excluded=rim)
    x = rng.standard_normal(hat.dimension)
    label = f"matvec, {{3,7}} patch (n={hat.dimension})"
    py = time_matvec(_accel_py, hat.struct, x, args.repeat)
    cy = time_matvec(_accel, hat.struct, x, args.repeat) if _accel else None
    row(label, py, cy)

    small = tessellation_patch(TessellationParams(3, 7, 2))
    indptr, indices = small.csr()
    allowed = np.array(
        [1 if small.is_interior(v) else 0 for v in range(small.vertex_count)],
        dtype=np.uint8,
    )
    label = f"witness enumeration (max_size={args.max_size})"
    py, py_result = time_enumeration(
        _accel_py, indptr, indices, allowed, args.max_size, args.enum_repeat
    )
    if _accel:
        cy, cy_result = time_enumeration(
            _accel, indptr, indices, allowed, args.max_size, args.enum_repeat
        )
        assert tuple(py_result[:2]) == tuple(cy_result[:2]), "backends disagree"
    else:
        cy = None
    row(label, py, cy)


if __name__ == "__main__":
    main()

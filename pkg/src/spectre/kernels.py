"""Kernel dispatch: compiled extension when available, numpy fallback otherwise.

Set SPECTRE_NO_EXT=1 to force the fallback (used by the parity tests and the
benchmark).  Both backends implement the same two primitives and must agree:
bit-for-bit on the integer enumeration, to rounding on the float matvec.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

if os.environ.get("SPECTRE_NO_EXT") == "1":
    from . import _accel_py as _impl

    _BACKEND = "python"
else:
    try:
        from . import _accel as _impl

        _BACKEND = "cython"
    except ImportError:
        from . import _accel_py as _impl

        _BACKEND = "python"


def backend_name() -> str:
    return _BACKEND


@dataclass
class AdjacencyStructure:
    """Masked adjacency in kernel form: CSR edges plus complete blocks.

    Indices are positions within the mask, not host vertex ids.  Edges that
    lie inside one of the blocks appear only through the block lists.
    """

    size: int
    indptr: np.ndarray
    indices: np.ndarray
    block_offsets: np.ndarray
    block_members: np.ndarray


def adj_matvec(struct: AdjacencyStructure, x: np.ndarray, out=None) -> np.ndarray:
    if out is None:
        out = np.empty(struct.size, dtype=np.float64)
    _impl.adj_matvec(
        struct.indptr,
        struct.indices,
        struct.block_offsets,
        struct.block_members,
        np.ascontiguousarray(x, dtype=np.float64),
        out,
    )
    return out


def min_ratio_connected(indptr, indices, allowed, max_size):
    """Best (boundary, area, members) over connected allowed subsets, or None."""
    res = _impl.min_ratio_connected(
        np.ascontiguousarray(indptr, dtype=np.int64),
        np.ascontiguousarray(indices, dtype=np.int64),
        np.ascontiguousarray(allowed, dtype=np.uint8),
        int(max_size),
    )
    if res is None:
        return None
    boundary, area, members = res
    return (int(boundary), int(area), tuple(int(v) for v in members))

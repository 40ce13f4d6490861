"""Pure-Python/numpy fallback for the hot kernels.

Mirrors spectre._accel exactly; selected by spectre.kernels when the compiled
extension is unavailable or SPECTRE_NO_EXT=1.
"""

from __future__ import annotations

import numpy as np


def adj_matvec(indptr, indices, block_offsets, block_members, x, out):
    """out = A*x for the masked adjacency split into CSR edges plus cliques.

    Inside a complete block the row sum is (block sum) - x[v], so cliques
    cost O(size) instead of O(size^2).
    """
    n = len(indptr) - 1
    row_ids = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
    if len(indices):
        out[:] = np.bincount(row_ids, weights=x[indices], minlength=n)
    else:
        out[:] = 0.0
    for b in range(len(block_offsets) - 1):
        mem = block_members[block_offsets[b] : block_offsets[b + 1]]
        xs = x[mem]
        out[mem] += xs.sum() - xs
    return out


def min_ratio_connected(indptr, indices, allowed, max_size):
    """Minimize |edge boundary| / degree-area over connected subsets.

    Enumerates every connected subset of allowed vertices with at most
    max_size members exactly once: subsets are rooted at their smallest
    member and grown through an extension list, where candidates already
    tried at a branch point stay banned for the rest of that branch.
    Comparisons are exact integer cross products; ties prefer fewer
    vertices, then the lexicographically smallest sorted member tuple.

    Returns (boundary_edges, area, members) or None when no allowed vertex.
    """
    iptr = [int(v) for v in indptr]
    idx = [int(v) for v in indices]
    allow = [bool(a) for a in allowed]
    n = len(iptr) - 1
    if max_size < 1:
        raise ValueError("max_size must be at least 1")

    seen = [False] * n
    in_set = [False] * n
    members = []
    best = None  # (boundary, area, size, sorted members)

    def note(area, internal):
        nonlocal best
        boundary = area - 2 * internal
        if best is not None:
            lhs = boundary * best[1]
            rhs = best[0] * area
            if lhs > rhs:
                return
            if lhs == rhs:
                if len(members) > best[2]:
                    return
                if len(members) == best[2] and tuple(sorted(members)) >= best[3]:
                    return
        best = (boundary, area, len(members), tuple(sorted(members)))

    def extend(root, cands, area, internal):
        note(area, internal)
        if len(members) == max_size:
            return
        for i in range(len(cands) - 1, -1, -1):
            u = cands[i]
            inter = 0
            fresh = []
            for j in range(iptr[u], iptr[u + 1]):
                w = idx[j]
                if in_set[w]:
                    inter += 1
                elif w > root and allow[w] and not seen[w]:
                    seen[w] = True
                    fresh.append(w)
            in_set[u] = True
            members.append(u)
            extend(root, cands[:i] + fresh, area + iptr[u + 1] - iptr[u], internal + inter)
            members.pop()
            in_set[u] = False
            for w in fresh:
                seen[w] = False

    for root in range(n):
        if not allow[root]:
            continue
        in_set[root] = True
        members.append(root)
        cands = []
        for j in range(iptr[root], iptr[root + 1]):
            w = idx[j]
            if w > root and allow[w] and not seen[w]:
                seen[w] = True
                cands.append(w)
        extend(root, cands, iptr[root + 1] - iptr[root], 0)
        members.pop()
        in_set[root] = False
        for w in cands:
            seen[w] = False

    if best is None:
        return None
    return (best[0], best[1], best[3])

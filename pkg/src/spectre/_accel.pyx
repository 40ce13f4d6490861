# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: masked adjacency matvec and connected-subset search.

Must stay behaviourally identical to spectre._accel_py; the parity tests
compare both backends on the same inputs.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def adj_matvec(cnp.int64_t[::1] indptr, cnp.int64_t[::1] indices,
               cnp.int64_t[::1] block_offsets, cnp.int64_t[::1] block_members,
               double[::1] x, double[::1] out):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t i, j, m
    cdef double s
    for i in range(n):
        s = 0.0
        for j in range(indptr[i], indptr[i + 1]):
            s += x[indices[j]]
        out[i] = s
    for i in range(block_offsets.shape[0] - 1):
        s = 0.0
        for j in range(block_offsets[i], block_offsets[i + 1]):
            s += x[block_members[j]]
        for j in range(block_offsets[i], block_offsets[i + 1]):
            m = block_members[j]
            out[m] += s - x[m]
    return None


cdef struct SearchState:
    cnp.int64_t* indptr
    cnp.int64_t* indices
    unsigned char* allow
    unsigned char* seen
    unsigned char* in_set
    cnp.int64_t* members
    cnp.int64_t* cand
    cnp.int64_t* scratch
    cnp.int64_t* best_members
    cnp.int64_t best_b
    cnp.int64_t best_a
    cnp.int64_t best_size
    cnp.int64_t n
    cnp.int64_t max_size
    cnp.int64_t root
    cnp.int64_t depth
    cnp.int64_t area
    cnp.int64_t internal
    bint has_best


cdef void _sort_members(SearchState* st) noexcept:
    cdef Py_ssize_t i, j
    cdef cnp.int64_t key
    for i in range(st.depth):
        st.scratch[i] = st.members[i]
    for i in range(1, st.depth):
        key = st.scratch[i]
        j = i - 1
        while j >= 0 and st.scratch[j] > key:
            st.scratch[j + 1] = st.scratch[j]
            j -= 1
        st.scratch[j + 1] = key


cdef void _store_best(SearchState* st, cnp.int64_t b) noexcept:
    cdef Py_ssize_t i
    st.best_b = b
    st.best_a = st.area
    st.best_size = st.depth
    for i in range(st.depth):
        st.best_members[i] = st.scratch[i]
    st.has_best = True


cdef void _note(SearchState* st) noexcept:
    cdef cnp.int64_t b = st.area - 2 * st.internal
    cdef cnp.int64_t lhs, rhs
    cdef Py_ssize_t i
    if not st.has_best:
        _sort_members(st)
        _store_best(st, b)
        return
    lhs = b * st.best_a
    rhs = st.best_b * st.area
    if lhs > rhs:
        return
    if lhs < rhs:
        _sort_members(st)
        _store_best(st, b)
        return
    if st.depth > st.best_size:
        return
    if st.depth < st.best_size:
        _sort_members(st)
        _store_best(st, b)
        return
    _sort_members(st)
    for i in range(st.depth):
        if st.scratch[i] < st.best_members[i]:
            _store_best(st, b)
            return
        if st.scratch[i] > st.best_members[i]:
            return


cdef void _extend(SearchState* st, Py_ssize_t ncand) noexcept:
    _note(st)
    if st.depth == st.max_size:
        return
    cdef cnp.int64_t* cur = st.cand + st.depth * st.n
    cdef cnp.int64_t* nxt = st.cand + (st.depth + 1) * st.n
    cdef Py_ssize_t i, j, k, nfresh
    cdef cnp.int64_t u, w, inter, dg
    for i in range(ncand - 1, -1, -1):
        u = cur[i]
        for k in range(i):
            nxt[k] = cur[k]
        inter = 0
        nfresh = 0
        for j in range(st.indptr[u], st.indptr[u + 1]):
            w = st.indices[j]
            if st.in_set[w]:
                inter += 1
            elif w > st.root and st.allow[w] and not st.seen[w]:
                st.seen[w] = 1
                nxt[i + nfresh] = w
                nfresh += 1
        st.in_set[u] = 1
        st.members[st.depth] = u
        st.depth += 1
        dg = st.indptr[u + 1] - st.indptr[u]
        st.area += dg
        st.internal += inter
        _extend(st, i + nfresh)
        st.depth -= 1
        st.area -= dg
        st.internal -= inter
        st.in_set[u] = 0
        for k in range(nfresh):
            st.seen[nxt[i + k]] = 0


def min_ratio_connected(cnp.int64_t[::1] indptr, cnp.int64_t[::1] indices,
                        cnp.uint8_t[::1] allowed, Py_ssize_t max_size):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    if n <= 0:
        return None

    seen_arr = np.zeros(n, dtype=np.uint8)
    in_set_arr = np.zeros(n, dtype=np.uint8)
    members_arr = np.zeros(max_size, dtype=np.int64)
    cand_arr = np.zeros((max_size + 1) * n, dtype=np.int64)
    scratch_arr = np.zeros(max_size, dtype=np.int64)
    best_arr = np.zeros(max_size, dtype=np.int64)

    cdef cnp.uint8_t[::1] seen = seen_arr
    cdef cnp.uint8_t[::1] in_set = in_set_arr
    cdef cnp.int64_t[::1] members = members_arr
    cdef cnp.int64_t[::1] cand = cand_arr
    cdef cnp.int64_t[::1] scratch = scratch_arr
    cdef cnp.int64_t[::1] best = best_arr
    cdef cnp.int64_t[::1] idx_view = indices

    cdef SearchState st
    st.indptr = &indptr[0]
    st.indices = &idx_view[0] if indices.shape[0] > 0 else NULL
    st.allow = &allowed[0]
    st.seen = &seen[0]
    st.in_set = &in_set[0]
    st.members = &members[0]
    st.cand = &cand[0]
    st.scratch = &scratch[0]
    st.best_members = &best[0]
    st.n = n
    st.max_size = max_size
    st.has_best = False
    st.best_b = 0
    st.best_a = 0
    st.best_size = 0

    cdef Py_ssize_t root, j, k, ncand
    cdef cnp.int64_t w
    cdef cnp.int64_t* row
    for root in range(n):
        if not allowed[root]:
            continue
        st.root = root
        st.in_set[root] = 1
        st.members[0] = root
        st.depth = 1
        st.area = st.indptr[root + 1] - st.indptr[root]
        st.internal = 0
        row = st.cand + st.n
        ncand = 0
        for j in range(st.indptr[root], st.indptr[root + 1]):
            w = st.indices[j]
            if w > root and st.allow[w] and not st.seen[w]:
                st.seen[w] = 1
                row[ncand] = w
                ncand += 1
        _extend(&st, ncand)
        st.in_set[root] = 0
        for k in range(ncand):
            st.seen[row[k]] = 0

    if not st.has_best:
        return None
    out = tuple(int(best_arr[i]) for i in range(st.best_size))
    return (int(st.best_b), int(st.best_a), out)

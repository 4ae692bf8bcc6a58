# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels.  Same signatures and tie-breaking as ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()

BACKEND = "cython"

ctypedef cnp.int64_t i64

cdef i64 NEG = -(1 << 60)


def residual_adjacency(i64 num_nodes, tail, head):
    """CSR form of the residual adjacency: ``(start, nbr, arc, fwd)`` arrays."""
    cdef i64[:] tl = np.ascontiguousarray(tail, dtype=np.int64)
    cdef i64[:] hd = np.ascontiguousarray(head, dtype=np.int64)
    cdef i64 m = tl.shape[0]
    nbr = np.empty(2 * m, dtype=np.int64)
    arc = np.empty(2 * m, dtype=np.int64)
    fwd = np.empty(2 * m, dtype=np.int64)
    own = np.empty(2 * m, dtype=np.int64)
    cdef i64 a
    for a in range(m):
        own[2 * a] = tl[a]; nbr[2 * a] = hd[a]; arc[2 * a] = a; fwd[2 * a] = 1
        own[2 * a + 1] = hd[a]; nbr[2 * a + 1] = tl[a]; arc[2 * a + 1] = a; fwd[2 * a + 1] = 0
    order = np.lexsort((arc, 1 - fwd, nbr, own))
    start = np.zeros(num_nodes + 1, dtype=np.int64)
    np.add.at(start, own + 1, 1)
    start = np.cumsum(start)
    return start, nbr[order], arc[order], fwd[order]


cdef int _search(i64 num_nodes, i64 source, i64 sink,
                 i64[:] start, i64[:] nbr, i64[:] arc, i64[:] fwd,
                 i64[:] lower, i64[:] flow, i64[:] parent, char* seen,
                 i64* stk_node, i64* stk_pos, int stop_at_sink) nogil:
    cdef i64 v, top, u, i, w, a
    for v in range(num_nodes):
        seen[v] = 0
    seen[source] = 1
    top = 0
    stk_node[0] = source
    stk_pos[0] = start[source]
    while top >= 0:
        u = stk_node[top]
        i = stk_pos[top]
        while i < start[u + 1]:
            w = nbr[i]
            a = arc[i]
            i += 1
            if seen[w]:
                continue
            if fwd[i - 1] and flow[a] <= lower[a]:
                continue
            seen[w] = 1
            parent[w] = 2 * a + fwd[i - 1]
            if stop_at_sink and w == sink:
                return 1
            stk_pos[top] = i
            top += 1
            stk_node[top] = w
            stk_pos[top] = start[w]
            break
        else:
            top -= 1
    return 0


def greedy_decompose(i64 n, tail, head, lower, flow, elem_arc):
    """Decrementing-flow greedy; mutates ``lower`` and ``flow`` (int64 arrays)."""
    cdef i64 num_nodes = 2 * n + 2
    cdef i64 s = 2 * n, t = 2 * n + 1
    start_, nbr_, arc_, fwd_ = residual_adjacency(num_nodes, tail, head)
    cdef i64[:] start = start_
    cdef i64[:] nbr = nbr_
    cdef i64[:] arc = arc_
    cdef i64[:] fwd = fwd_
    cdef i64[:] tl = np.ascontiguousarray(tail, dtype=np.int64)
    cdef i64[:] hd = np.ascontiguousarray(head, dtype=np.int64)
    cdef i64[:] lw = lower
    cdef i64[:] fl = flow
    cdef i64[:] ea = np.ascontiguousarray(elem_arc, dtype=np.int64)
    labels_ = np.full(n, -1, dtype=np.int64)
    cdef i64[:] labels = labels_
    parent_ = np.zeros(num_nodes, dtype=np.int64)
    cdef i64[:] parent = parent_
    cdef char* seen = <char*> malloc(num_nodes)
    cdef i64* stk_node = <i64*> malloc(num_nodes * sizeof(i64))
    cdef i64* stk_pos = <i64*> malloc(num_nodes * sizeof(i64))
    cdef i64 remaining = n, decrements = 0, extracted = 0, taken, v, a, code
    cdef int found
    try:
        with nogil:
            while remaining > 0:
                found = _search(num_nodes, s, t, start, nbr, arc, fwd, lw, fl,
                                parent, seen, stk_node, stk_pos, 1)
                if found:
                    v = t
                    while v != s:
                        code = parent[v]
                        a = code >> 1
                        if code & 1:
                            fl[a] -= 1
                            v = tl[a]
                        else:
                            fl[a] += 1
                            v = hd[a]
                    decrements += 1
                    continue
                taken = 0
                for v in range(n):
                    a = ea[v]
                    if labels[v] < 0 and seen[2 * v] and not seen[2 * v + 1] and fl[a] == 1:
                        labels[v] = extracted
                        lw[a] = 0
                        taken += 1
                if taken == 0:
                    break
                remaining -= taken
                extracted += 1
    finally:
        free(seen)
        free(stk_node)
        free(stk_pos)
    if remaining > 0:
        raise RuntimeError("flow greedy stalled with no extractable antichain")
    return labels_.tolist(), decrements, extracted


# --------------------------------------------------------------------------- #


cdef inline void _rebuild(i64* tree, i64* add, i64 i) nogil:
    cdef i64 l, r
    while i > 1:
        i >>= 1
        l = tree[2 * i]
        r = tree[2 * i + 1]
        tree[i] = (l if l > r else r) + add[i]


cdef void _range_add(i64* tree, i64* add, i64 size, i64 l, i64 r, i64 val) nogil:
    l += size
    r += size + 1
    cdef i64 l0 = l, r0 = r - 1
    while l < r:
        if l & 1:
            tree[l] += val
            add[l] += val
            l += 1
        if r & 1:
            r -= 1
            tree[r] += val
            add[r] += val
        l >>= 1
        r >>= 1
    _rebuild(tree, add, l0)
    _rebuild(tree, add, r0)


cdef i64 _first_above(i64* rt, i64 size2, i64 p, i64 j, i64* stk) nogil:
    cdef i64 top = 0, i, lo_, hi_, mid
    stk[0] = 1; stk[1] = 0; stk[2] = size2
    while top >= 0:
        i = stk[3 * top]; lo_ = stk[3 * top + 1]; hi_ = stk[3 * top + 2]
        top -= 1
        if lo_ >= p or rt[i] < j:
            continue
        if i >= size2:
            return i - size2
        mid = (lo_ + hi_) // 2
        top += 1
        stk[3 * top] = 2 * i + 1; stk[3 * top + 1] = mid; stk[3 * top + 2] = hi_
        top += 1
        stk[3 * top] = 2 * i; stk[3 * top + 1] = lo_; stk[3 * top + 2] = mid
    return -1


def interval_greedy(lo, hi):
    """Greedy maximum-antichain decomposition of an interval order (see ``_pykernels``)."""
    lo_a = np.asarray(lo, dtype=np.int64)
    hi_a = np.asarray(hi, dtype=np.int64)
    cdef i64 n = lo_a.shape[0]
    if n == 0:
        return []
    coords = np.unique(np.concatenate([lo_a, hi_a]))
    cdef i64[:] seg_lo = np.searchsorted(coords, lo_a).astype(np.int64)
    cdef i64[:] seg_hi = (np.searchsorted(coords, hi_a) - 1).astype(np.int64)
    cdef i64 nseg = coords.shape[0] - 1
    cdef i64 size = 1
    while size < nseg:
        size *= 2
    tree_ = np.full(2 * size, NEG, dtype=np.int64)
    add_ = np.zeros(2 * size, dtype=np.int64)
    tree_[size:size + nseg] = 0
    cdef i64[:] tree = tree_
    cdef i64[:] add = add_
    cdef i64 i, v, k
    for i in range(size - 1, 0, -1):
        tree[i] = max(tree[2 * i], tree[2 * i + 1])

    order_ = np.lexsort((np.arange(n), np.asarray(seg_lo)))
    cdef i64[:] order = order_.astype(np.int64)
    cdef i64[:] starts = np.asarray(seg_lo)[order_].astype(np.int64)
    cdef i64 size2 = 1
    while size2 < n:
        size2 *= 2
    rt_ = np.full(2 * size2, -1, dtype=np.int64)
    rt_[size2:size2 + n] = np.asarray(seg_hi)[order_]
    cdef i64[:] rt = rt_
    for i in range(size2 - 1, 0, -1):
        rt[i] = max(rt[2 * i], rt[2 * i + 1])

    labels_ = np.full(n, -1, dtype=np.int64)
    cdef i64[:] labels = labels_
    cdef i64* stk = <i64*> malloc(3 * 4 * (64 + 2) * sizeof(i64))
    cdef i64 remaining = n, label = 0, j, target, p, a, b, mid
    cdef i64* tp = &tree[0]
    cdef i64* ap = &add[0]
    cdef i64* rp = &rt[0]
    try:
        with nogil:
            for v in range(n):
                _range_add(tp, ap, size, seg_lo[v], seg_hi[v], 1)
            while remaining > 0:
                i = 1
                while i < size:
                    target = tree[i] - add[i]
                    if tree[2 * i] == target:
                        i = 2 * i
                    else:
                        i = 2 * i + 1
                j = i - size
                a = 0
                b = n
                while a < b:
                    mid = (a + b) // 2
                    if j < starts[mid]:
                        b = mid
                    else:
                        a = mid + 1
                p = a
                while True:
                    k = _first_above(rp, size2, p, j, stk)
                    if k < 0:
                        break
                    v = order[k]
                    labels[v] = label
                    i = size2 + k
                    rt[i] = -1
                    while i > 1:
                        i >>= 1
                        rt[i] = max(rt[2 * i], rt[2 * i + 1])
                    _range_add(tp, ap, size, seg_lo[v], seg_hi[v], -1)
                    remaining -= 1
                label += 1
    finally:
        free(stk)
    return labels_.tolist()


# --------------------------------------------------------------------------- #


def partition(keys, arr, i64 lo, i64 hi, i64 pivot_pos):
    """Stable three-way split of ``arr[lo:hi]`` around ``arr[pivot_pos]``."""
    cdef i64[:] k = keys
    cdef i64[:] a = arr
    cdef i64 p = a[pivot_pos]
    cdef i64 kp = k[p]
    cdef i64 m = hi - lo
    cdef i64* buf = <i64*> malloc((m if m > 0 else 1) * sizeof(i64))
    cdef i64 i, x, ns = 0, nl = 0, pos
    try:
        with nogil:
            for i in range(lo, hi):
                x = a[i]
                if x == p:
                    continue
                if k[x] < kp:
                    a[lo + ns] = x
                    ns += 1
                else:
                    buf[nl] = x
                    nl += 1
            pos = lo + ns
            a[pos] = p
            for i in range(nl):
                a[pos + 1 + i] = buf[i]
    finally:
        free(buf)
    return pos

"""Pure-Python kernels.  ``_ckernels.pyx`` mirrors these signatures exactly.

All three kernels operate on flat integer arrays so both backends see the
same data and make the same deterministic choices.
"""

from __future__ import annotations

BACKEND = "python"

_NEG = -(1 << 60)


# --------------------------------------------------------------------------- #
# Decrementing-flow greedy antichain decomposition
# --------------------------------------------------------------------------- #


def residual_adjacency(num_nodes, tail, head):
    """Per node, ``(neighbor, arc, forward)`` triples sorted by neighbor index.

    Forward entries follow an arc tail->head, backward entries head->tail.
    """
    adj = [[] for _ in range(num_nodes)]
    for a in range(len(tail)):
        u, w = int(tail[a]), int(head[a])
        adj[u].append((w, a, 1))
        adj[w].append((u, a, 0))
    for lst in adj:
        lst.sort(key=lambda e: (e[0], -e[2], e[1]))
    return adj


def search(adj, source, sink, lower, flow, parent_arc, stop_at_sink):
    """DFS over decrementing arcs from ``source``; returns the visited flags.

    ``parent_arc[v]`` receives ``2*arc + forward`` for the arc used to enter v.
    """
    seen = [False] * len(adj)
    seen[source] = True
    stack = [(source, 0)]
    while stack:
        u, i = stack[-1]
        lst = adj[u]
        while i < len(lst):
            w, a, fwd = lst[i]
            i += 1
            if seen[w]:
                continue
            if fwd and flow[a] <= lower[a]:
                continue
            seen[w] = True
            parent_arc[w] = 2 * a + fwd
            stack[-1] = (u, i)
            if stop_at_sink and w == sink:
                return seen
            stack.append((w, 0))
            break
        else:
            stack.pop()
    return seen


def greedy_decompose(n, tail, head, lower, flow, elem_arc):
    """Run the decrementing-flow greedy on network arrays in place.

    Nodes are ``v- = 2v``, ``v+ = 2v+1``, ``s = 2n``, ``t = 2n+1``.  ``lower``
    and ``flow`` are mutated.  Returns ``(labels, decrements, extractions)``
    where ``labels[v]`` is the index of the antichain that took ``v``.
    """
    num_nodes = 2 * n + 2
    s, t = 2 * n, 2 * n + 1
    adj = residual_adjacency(num_nodes, tail, head)
    labels = [-1] * n
    parent = [0] * num_nodes
    remaining = n
    decrements = 0
    extracted = 0
    while remaining:
        seen = search(adj, s, t, lower, flow, parent, True)
        if seen[t]:
            v = t
            while v != s:
                code = parent[v]
                a, fwd = code >> 1, code & 1
                if fwd:
                    flow[a] -= 1
                    v = int(tail[a])
                else:
                    flow[a] += 1
                    v = int(head[a])
            decrements += 1
            continue
        taken = 0
        for v in range(n):
            a = elem_arc[v]
            if labels[v] < 0 and seen[2 * v] and not seen[2 * v + 1] and flow[a] == 1:
                labels[v] = extracted
                lower[a] = 0
                taken += 1
        if taken == 0:
            raise RuntimeError("flow greedy stalled with no extractable antichain")
        remaining -= taken
        extracted += 1
    return labels, decrements, extracted


# --------------------------------------------------------------------------- #
# Repeated maximum-clique removal on open intervals
# --------------------------------------------------------------------------- #


def interval_greedy(lo, hi):
    """Greedy maximum-antichain decomposition of an interval order.

    Intervals are open with integer endpoints; ``v < w`` iff ``hi[v] <= lo[w]``.
    Each round picks the leftmost elementary segment of maximum depth and
    removes every remaining interval covering it.  Returns per-element labels.
    """
    n = len(lo)
    if n == 0:
        return []
    coords = sorted(set(int(x) for x in lo) | set(int(x) for x in hi))
    pos = {c: i for i, c in enumerate(coords)}
    seg_lo = [pos[int(x)] for x in lo]
    seg_hi = [pos[int(x)] - 1 for x in hi]  # inclusive last segment
    nseg = len(coords) - 1

    size = 1
    while size < nseg:
        size *= 2
    tree = [_NEG] * (2 * size)
    add = [0] * (2 * size)
    for j in range(nseg):
        tree[size + j] = 0
    for i in range(size - 1, 0, -1):
        tree[i] = max(tree[2 * i], tree[2 * i + 1])

    def rebuild(i):
        while i > 1:
            i >>= 1
            tree[i] = max(tree[2 * i], tree[2 * i + 1]) + add[i]

    def range_add(l, r, val):
        l += size
        r += size + 1
        l0, r0 = l, r - 1
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
        rebuild(l0)
        rebuild(r0)

    for v in range(n):
        range_add(seg_lo[v], seg_hi[v], 1)

    # second tree: intervals ordered by left segment, max of right segment
    order = sorted(range(n), key=lambda v: (seg_lo[v], v))
    starts = [seg_lo[v] for v in order]
    size2 = 1
    while size2 < n:
        size2 *= 2
    rt = [-1] * (2 * size2)
    for k, v in enumerate(order):
        rt[size2 + k] = seg_hi[v]
    for i in range(size2 - 1, 0, -1):
        rt[i] = max(rt[2 * i], rt[2 * i + 1])

    def first_above(p, j):
        # leftmost k < p with rt leaf value >= j, or -1
        i = 1
        lo_, hi_ = 0, size2
        stack = [(1, 0, size2)]
        while stack:
            i, lo_, hi_ = stack.pop()
            if lo_ >= p or rt[i] < j:
                continue
            if i >= size2:
                return i - size2
            mid = (lo_ + hi_) // 2
            stack.append((2 * i + 1, mid, hi_))
            stack.append((2 * i, lo_, mid))
        return -1

    def clear(k):
        i = size2 + k
        rt[i] = -1
        while i > 1:
            i >>= 1
            rt[i] = max(rt[2 * i], rt[2 * i + 1])

    labels = [-1] * n
    remaining = n
    label = 0
    while remaining:
        i = 1
        while i < size:
            target = tree[i] - add[i]
            i = 2 * i if tree[2 * i] == target else 2 * i + 1
        j = i - size
        # intervals with seg_lo <= j
        p = _bisect_right(starts, j)
        while True:
            k = first_above(p, j)
            if k < 0:
                break
            v = order[k]
            labels[v] = label
            clear(k)
            range_add(seg_lo[v], seg_hi[v], -1)
            remaining -= 1
        label += 1
    return labels


def _bisect_right(a, x):
    lo, hi = 0, len(a)
    while lo < hi:
        mid = (lo + hi) // 2
        if x < a[mid]:
            hi = mid
        else:
            lo = mid + 1
    return lo


# --------------------------------------------------------------------------- #
# Counted partition for selection
# --------------------------------------------------------------------------- #


def partition(keys, arr, lo, hi, pivot_pos):
    """Stable three-way split of ``arr[lo:hi]`` around ``arr[pivot_pos]``.

    Elements with a smaller key go first, then the pivot, then the rest.
    Exactly ``hi - lo - 1`` key comparisons are made.  Returns the pivot's
    new position.
    """
    p = int(arr[pivot_pos])
    kp = keys[p]
    small = []
    large = []
    for i in range(lo, hi):
        x = int(arr[i])
        if x == p:
            continue
        if keys[x] < kp:
            small.append(x)
        else:
            large.append(x)
    i = lo
    for x in small:
        arr[i] = x
        i += 1
    mid = i
    arr[i] = p
    i += 1
    for x in large:
        arr[i] = x
        i += 1
    return mid

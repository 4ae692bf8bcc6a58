"""Auxiliary network of a poset and the decrementing-flow greedy decomposition.

Every element ``v`` is split into an arc ``(v-, v+)`` carrying lower bound 1,
Hasse arcs join ``v+`` to ``w-``, a source feeds the minimal elements and the
maximal elements drain into a sink.  Starting from any feasible flow of value
``n``, the greedy repeatedly pushes one unit back along a decrementing path;
when none exists the tight element arcs leaving the reachable set form a
maximum antichain of the elements not yet removed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from . import _pykernels, kernels
from .poset import Poset


@dataclass
class Network:
    """Arc arrays of ``D(P)``.

    Nodes are numbered ``v- = 2v``, ``v+ = 2v+1``, ``s = 2n``, ``t = 2n+1``.
    ``lower`` and ``flow`` are mutable int64 arrays indexed by arc.
    """

    n: int
    tail: np.ndarray
    head: np.ndarray
    lower: np.ndarray
    flow: np.ndarray
    elem_arc: np.ndarray
    pred_covers: list[list[int]]
    succ_covers: list[list[int]]

    @property
    def source(self) -> int:
        return 2 * self.n

    @property
    def sink(self) -> int:
        return 2 * self.n + 1

    @property
    def num_nodes(self) -> int:
        return 2 * self.n + 2

    @property
    def num_arcs(self) -> int:
        return len(self.tail)

    def node_name(self, u: int) -> str:
        if u == self.source:
            return "s"
        if u == self.sink:
            return "t"
        return f"{u // 2}{'+' if u % 2 else '-'}"

    def arcs(self) -> list[tuple[int, int]]:
        return list(zip(self.tail.tolist(), self.head.tolist()))

    def value(self) -> int:
        return int(self.flow[self.tail == self.source].sum())

    def is_feasible(self) -> bool:
        if (self.flow < self.lower).any():
            return False
        balance = np.zeros(self.num_nodes, dtype=np.int64)
        np.add.at(balance, self.head, self.flow)
        np.subtract.at(balance, self.tail, self.flow)
        inner = np.ones(self.num_nodes, dtype=bool)
        inner[[self.source, self.sink]] = False
        return not balance[inner].any()

    def copy(self) -> "Network":
        return Network(
            self.n, self.tail, self.head, self.lower.copy(), self.flow.copy(),
            self.elem_arc, self.pred_covers, self.succ_covers,
        )

    def to_dot(self) -> str:
        lines = ["digraph D {"]
        for a, (u, w) in enumerate(self.arcs()):
            lines.append(
                f'  "{self.node_name(u)}" -> "{self.node_name(w)}" '
                f'[label="{self.flow[a]}/{self.lower[a]}"];'
            )
        lines.append("}")
        return "\n".join(lines)


@dataclass(frozen=True)
class AntichainDecomposition:
    """Antichains ``S_1, ..., S_k`` in extraction order."""

    sets: tuple[tuple[int, ...], ...]
    decrements: int = 0

    @property
    def k(self) -> int:
        return len(self.sets)

    @property
    def n(self) -> int:
        return sum(len(s) for s in self.sets)

    @property
    def sizes(self) -> list[int]:
        return [len(s) for s in self.sets]

    def labels(self) -> list[int]:
        """``labels[v]`` is the index of the set containing ``v``."""
        out = [0] * self.n
        for i, s in enumerate(self.sets):
            for v in s:
                out[v] = i
        return out

    @classmethod
    def from_labels(cls, labels, decrements: int = 0) -> "AntichainDecomposition":
        k = max(labels) + 1 if len(labels) else 0
        sets: list[list[int]] = [[] for _ in range(k)]
        for v, lab in enumerate(labels):
            sets[lab].append(v)
        return cls(tuple(tuple(s) for s in sets), decrements)


def build_network(P: Poset) -> Network:
    """``D(P)`` with zero flow; lower bound 1 on element arcs, 0 elsewhere."""
    n = P.n
    s, t = 2 * n, 2 * n + 1
    mins, maxs = P.minimal(), P.maximal()
    tail = [s] * len(mins) + [2 * v for v in range(n)]
    head = [2 * v for v in mins] + [2 * v + 1 for v in range(n)]
    for v, w in P.covers:
        tail.append(2 * v + 1)
        head.append(2 * w)
    tail += [2 * v + 1 for v in maxs]
    head += [t] * len(maxs)
    m = len(tail)
    lower = np.zeros(m, dtype=np.int64)
    elem_arc = np.arange(len(mins), len(mins) + n, dtype=np.int64)
    lower[elem_arc] = 1
    return Network(
        n,
        np.array(tail, dtype=np.int64),
        np.array(head, dtype=np.int64),
        lower,
        np.zeros(m, dtype=np.int64),
        elem_arc,
        P.predecessors(),
        P.successors(),
    )


def initial_flow(net: Network, rng: random.Random | None = None) -> Network:
    """Fill ``net.flow`` with one unit along a maximal chain through each element.

    Each element picks one lower cover and one upper cover (the smallest index,
    or a random one when ``rng`` is given); the chosen arcs form two forests
    and the unit paths are counted through subtree sizes.  Value is ``n``.
    """
    n = net.n
    pick = (lambda opts: rng.choice(opts)) if rng is not None else min
    down_parent = [pick(p) if p else -1 for p in net.pred_covers]
    up_parent = [pick(q) if q else -1 for q in net.succ_covers]

    order = _topological(net)
    down = [1] * n  # paths whose downward walk passes through v
    for v in reversed(order):
        if down_parent[v] >= 0:
            down[down_parent[v]] += down[v]
    up = [1] * n
    for v in order:
        if up_parent[v] >= 0:
            up[up_parent[v]] += up[v]

    arc_of: dict[tuple[int, int], int] = {}
    for a, (u, w) in enumerate(net.arcs()):
        arc_of[(u, w)] = a
    flow = np.zeros(net.num_arcs, dtype=np.int64)
    for v in range(n):
        flow[net.elem_arc[v]] += down[v] + up[v] - 1
        if down_parent[v] >= 0:
            flow[arc_of[(2 * down_parent[v] + 1, 2 * v)]] += down[v]
        else:
            flow[arc_of[(net.source, 2 * v)]] += down[v]
        if up_parent[v] >= 0:
            flow[arc_of[(2 * v + 1, 2 * up_parent[v])]] += up[v]
        else:
            flow[arc_of[(2 * v + 1, net.sink)]] += up[v]
    net.flow = flow
    return net


def _topological(net: Network) -> list[int]:
    indeg = [len(p) for p in net.pred_covers]
    order = [v for v in range(net.n) if indeg[v] == 0]
    for v in order:
        for w in net.succ_covers[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                order.append(w)
    return order


def decrementing_reachable(net: Network) -> set[int]:
    """Nodes reachable from ``s`` by arcs with ``flow > lower`` or backwards."""
    adj = _pykernels.residual_adjacency(net.num_nodes, net.tail, net.head)
    parent = [0] * net.num_nodes
    seen = _pykernels.search(adj, net.source, net.sink, net.lower, net.flow, parent, False)
    return {u for u, flag in enumerate(seen) if flag}


def extract_antichain(net: Network, reach: set[int], removed: set[int] = frozenset()) -> set[int]:
    """Elements whose arc leaves ``reach`` while tight at one unit."""
    return {
        v
        for v in range(net.n)
        if v not in removed
        and 2 * v in reach
        and 2 * v + 1 not in reach
        and net.flow[net.elem_arc[v]] == 1
    }


def greedy_antichain_decomposition(
    P: Poset, rng: random.Random | None = None, backend=None
) -> AntichainDecomposition:
    """Decompose ``P`` by repeatedly removing a maximum antichain.

    ``rng`` randomizes the initial flow; ``backend`` overrides the kernel
    module (``kernels.python_backend`` or ``kernels.compiled_backend``).
    """
    if P.n == 0:
        return AntichainDecomposition(())
    net = initial_flow(build_network(P), rng)
    impl = backend or kernels.active
    labels, decrements, _ = impl.greedy_decompose(
        P.n, net.tail, net.head, net.lower, net.flow, net.elem_arc
    )
    return AntichainDecomposition.from_labels(labels, decrements)

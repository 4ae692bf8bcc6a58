"""Entropy of comparability graphs, greedy points and chain potentials.

All entropies are in bits.  ``entropy_exact`` minimizes ``-(1/n) sum log2 x``
over the stable set polytope with away-step Frank-Wolfe; the linear
minimization oracle is a maximum-weight antichain (comparability graph) or a
maximum-weight chain (its complement).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Sequence

import numpy as np

from .flow import AntichainDecomposition, greedy_antichain_decomposition
from .poset import Poset, WeakOrder, antichain_matrix

LN2 = math.log(2.0)
X_FLOOR = 1e-12


class MembershipError(ValueError):
    """A point violates a chain inequality of the stable set polytope."""


@dataclass(frozen=True)
class StabPoint:
    x: tuple
    entropy: float

    @property
    def n(self) -> int:
        return len(self.x)


@dataclass(frozen=True)
class Potential:
    """Node labels of ``D(P)``: ``y_s = 0``, ``y_t = 1`` and per-element endpoints."""

    y_minus: tuple
    y_plus: tuple

    def node_vector(self) -> list:
        n = len(self.y_minus)
        y: list = [0] * (2 * n + 2)
        for v in range(n):
            y[2 * v] = self.y_minus[v]
            y[2 * v + 1] = self.y_plus[v]
        y[2 * n] = 0
        y[2 * n + 1] = 1
        return y

    def is_valid_for(self, P: Poset, tol: float = 0.0) -> bool:
        """Check nondecreasing along every arc of ``D(P)``."""
        y = self.node_vector()
        n = P.n
        s, t = 2 * n, 2 * n + 1
        arcs = [(2 * v, 2 * v + 1) for v in range(n)]
        arcs += [(s, 2 * v) for v in P.minimal()]
        arcs += [(2 * v + 1, t) for v in P.maximal()]
        arcs += [(2 * v + 1, 2 * w) for v, w in P.covers]
        if tol:
            return all(y[p] <= y[q] + tol for p, q in arcs)
        return all(y[p] <= y[q] for p, q in arcs)


def point_entropy(x: Sequence[Real]) -> float:
    """``-(1/n) sum log2 x_v``."""
    n = len(x)
    if n == 0:
        return 0.0
    return -sum(math.log2(v) for v in x) / n


def greedy_point(dec: AntichainDecomposition, n: int) -> StabPoint:
    if dec.n != n or sorted(v for s in dec.sets for v in s) != list(range(n)):
        raise ValueError("decomposition must cover 0..n-1 exactly once")
    x: list[Fraction] = [Fraction(0)] * n
    for s in dec.sets:
        share = Fraction(len(s), n)
        for v in s:
            x[v] = share
    h = sum(len(s) / n * math.log2(n / len(s)) for s in dec.sets)
    return StabPoint(tuple(x), h)


def potential_from_point(P: Poset, x: StabPoint | Sequence[Real], tol: float = 1e-9) -> Potential:
    """Longest-chain potential certifying ``x`` lies in STAB of the comparability graph.

    ``y_plus[v]`` is the heaviest chain ending at ``v``.  Exact inputs
    (ints, Fractions) are checked exactly; floats get ``tol`` slack.
    """
    xs = list(x.x if isinstance(x, StabPoint) else x)
    if len(xs) != P.n:
        raise ValueError("point and poset sizes differ")
    exact = all(isinstance(v, (int, Fraction)) for v in xs)
    slack = 0 if exact else tol
    if any(v < -slack for v in xs):
        raise MembershipError("negative coordinate")
    preds = P.predecessors()
    y_plus: list = [0] * P.n
    for v in P.topological_order():
        best = max((y_plus[u] for u in preds[v]), default=0)
        y_plus[v] = best + xs[v]
    heaviest = max(y_plus, default=0)
    if heaviest > 1 + slack:
        raise MembershipError(f"a chain has weight {float(heaviest):.6g} > 1")
    y_minus = [y_plus[v] - xs[v] for v in range(P.n)]
    return Potential(tuple(y_minus), tuple(y_plus))


def chain_inequalities_hold(P: Poset, x: Sequence[Real], tol: float = 1e-9) -> bool:
    try:
        potential_from_point(P, x, tol)
    except MembershipError:
        return False
    return True


def coloring_entropy(coloring: Sequence[Sequence[int]], n: int) -> float:
    """Entropy of the class-size distribution of a partition of ``0..n-1``."""
    seen = sorted(v for c in coloring for v in c)
    if seen != list(range(n)):
        raise ValueError("coloring is not a partition of 0..n-1")
    return entropy_of_sizes([len(c) for c in coloring])


def entropy_of_sizes(sizes: Sequence[int]) -> float:
    n = sum(sizes)
    return sum(s / n * math.log2(n / s) for s in sizes if s)


def weak_order_entropy(W: WeakOrder) -> float:
    return entropy_of_sizes(W.sizes)


# --------------------------------------------------------------------------- #
# Frank-Wolfe
# --------------------------------------------------------------------------- #


@dataclass
class EntropyResult:
    value: float
    x: np.ndarray
    gap: float
    iterations: int
    converged: bool
    history: list[float] = field(default_factory=list)

    def __float__(self) -> float:
        return self.value

    @property
    def lower_bound(self) -> float:
        return self.value - self.gap


def greedy_chain_decomposition(P: Poset) -> list[tuple[int, ...]]:
    """Repeatedly remove a longest chain; the greedy for the complement graph."""
    alive = np.ones(P.n, dtype=bool)
    chains = []
    while alive.any():
        c = _heaviest_chain(P, np.where(alive, 1.0, -np.inf))
        chains.append(c)
        alive[list(c)] = False
    return chains


def _heaviest_chain(P: Poset, w: np.ndarray) -> tuple[int, ...]:
    n = P.n
    best = np.full(n, -np.inf)
    prev = np.full(n, -1)
    strict = P.leq & ~np.eye(n, dtype=bool)
    for v in P.topological_order():
        if w[v] == -np.inf:
            continue
        below = np.flatnonzero(strict[:, v] & np.isfinite(best))
        if len(below):
            u = below[np.argmax(best[below])]
            if best[u] > 0:
                best[v] = best[u] + w[v]
                prev[v] = u
                continue
        best[v] = w[v]
    v = int(np.argmax(best))
    out = []
    while v >= 0:
        out.append(v)
        v = int(prev[v])
    return tuple(sorted(out, key=lambda u: int(P.leq[:, u].sum())))


def _line_search(x: np.ndarray, d: np.ndarray, gmax: float) -> float:
    neg = d < 0
    if neg.any():
        gmax = min(gmax, float(np.min((x[neg] - X_FLOOR) / -d[neg])))
    gmax = max(gmax, 0.0)

    def slope(g: float) -> float:
        return -float(np.sum(d / (x + g * d)))

    if slope(gmax) <= 0:
        return gmax
    lo, hi = 0.0, gmax
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if slope(mid) > 0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-15 * max(1.0, gmax):
            break
    return lo


def entropy_exact(
    P: Poset,
    mode: str = "comparability",
    iters: int = 20000,
    tol: float = 1e-4,
    limit: int | None = None,
) -> EntropyResult:
    """Entropy of ``G(P)`` (``mode="comparability"``) or of its complement.

    Stops once the Frank-Wolfe duality gap, in bits, is at most ``tol``.  If
    ``iters`` runs out first the best iterate comes back with
    ``converged=False``.
    """
    n = P.n
    if n == 0:
        return EntropyResult(0.0, np.zeros(0), 0.0, 0, True)
    if mode == "comparability":
        verts = antichain_matrix(P, limit).astype(float)
        start = [tuple(s) for s in greedy_antichain_decomposition(P).sets]

        def lmo(w: np.ndarray) -> tuple[int, ...]:
            return tuple(np.flatnonzero(verts[int(np.argmax(verts @ w))]).tolist())

    elif mode == "complement":
        start = greedy_chain_decomposition(P)

        def lmo(w: np.ndarray) -> tuple[int, ...]:
            return _heaviest_chain(P, w)

    else:
        raise ValueError(f"unknown mode {mode!r}")

    def indicator(s: tuple[int, ...]) -> np.ndarray:
        e = np.zeros(n)
        e[list(s)] = 1.0
        return e

    weights: dict[tuple[int, ...], float] = {tuple(sorted(s)): len(s) / n for s in start}
    x = sum(lam * indicator(s) for s, lam in weights.items())

    def objective(z: np.ndarray) -> float:
        return float(-np.sum(np.log2(z)) / n)

    history = [objective(x)]
    gap = math.inf
    it = 0
    for it in range(1, iters + 1):
        inv = 1.0 / x
        s = tuple(sorted(lmo(inv)))
        gap = (float(inv[list(s)].sum()) - n) / (n * LN2)
        if gap <= tol:
            it -= 1
            break
        # away vertex: active vertex with the largest gradient inner product
        away = min(weights, key=lambda a: float(inv[list(a)].sum()))
        away_gap = (n - float(inv[list(away)].sum())) / (n * LN2)
        if gap >= away_gap or len(weights) == 1:
            d = indicator(s) - x
            g = _line_search(x, d, 1.0)
            for key in weights:
                weights[key] *= 1 - g
            weights[s] = weights.get(s, 0.0) + g
        else:
            lam = weights[away]
            d = x - indicator(away)
            g = _line_search(x, d, lam / (1 - lam))
            for key in weights:
                weights[key] *= 1 + g
            weights[away] -= g
        weights = {k: v for k, v in weights.items() if v > 1e-15}
        total = sum(weights.values())
        weights = {k: v / total for k, v in weights.items()}
        x = np.maximum(sum(lam * indicator(a) for a, lam in weights.items()), X_FLOOR)
        history.append(objective(x))
    converged = gap <= tol
    return EntropyResult(objective(x), x, max(gap, 0.0), it, converged, history)

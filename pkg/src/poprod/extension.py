"""Greedy weak-order extension of a poset.

Pipeline: greedy antichain decomposition of ``P`` -> greedy point -> longest
chain potential -> interval order ``I`` read off the potential -> greedy
decomposition of ``I`` -> layers sorted into a weak order ``W``.

Greedy points take values ``|S|/n``, so every endpoint is kept as an integer
numerator over ``n`` and comparisons are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .entropy import Potential, StabPoint, entropy_of_sizes, greedy_point
from .flow import AntichainDecomposition, greedy_antichain_decomposition
from .poset import IntervalOrder, Poset, PosetError, WeakOrder


class InvalidPotentialError(ValueError):
    pass


@dataclass(frozen=True)
class GreedyExtension:
    """Result of :func:`greedy_weak_extension` with its intermediate trace."""

    interval: IntervalOrder
    weak: WeakOrder
    sigma: tuple[int, ...]
    first: AntichainDecomposition
    second: AntichainDecomposition

    @property
    def n(self) -> int:
        return self.interval.n

    @property
    def point(self) -> StabPoint:
        return greedy_point(self.first, self.n)

    @property
    def greedy_entropy(self) -> float:
        return entropy_of_sizes(self.first.sizes)

    @property
    def interval_greedy_entropy(self) -> float:
        return entropy_of_sizes(self.second.sizes)

    @property
    def potential(self) -> Potential:
        d = self.interval.denom
        return Potential(
            tuple(Fraction(int(a), d) for a in self.interval.lo),
            tuple(Fraction(int(b), d) for b in self.interval.hi),
        )

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "layers": [list(layer) for layer in self.weak.layers],
            "sigma": list(self.sigma),
            "first_decomposition": [list(s) for s in self.first.sets],
            "second_decomposition": [list(s) for s in self.second.sets],
            "interval_denominator": self.interval.denom,
            "interval_left": self.interval.lo.tolist(),
            "interval_right": self.interval.hi.tolist(),
            "greedy_entropy": self.greedy_entropy,
            "weak_entropy": entropy_of_sizes(self.weak.sizes),
        }


def interval_order_from_potential(P: Poset, y: Potential) -> IntervalOrder:
    """Interval order with ``v <= w`` iff ``y_plus[v] <= y_minus[w]``.

    Exact potentials (ints, Fractions) keep their values over a common
    denominator.  Float potentials are replaced by the ranks of their
    endpoint values, which preserves every comparison.
    """
    if len(y.y_minus) != P.n or not y.is_valid_for(P):
        raise InvalidPotentialError("not a potential on the auxiliary network of P")
    if any(b <= a for a, b in zip(y.y_minus, y.y_plus)):
        raise InvalidPotentialError("every element needs y_plus > y_minus")
    values = list(y.y_minus) + list(y.y_plus)
    if all(isinstance(v, (int, Fraction)) for v in values):
        denom = math.lcm(*(Fraction(v).denominator for v in values)) if values else 1
        lo = [int(Fraction(v) * denom) for v in y.y_minus]
        hi = [int(Fraction(v) * denom) for v in y.y_plus]
        return IntervalOrder(np.array(lo), np.array(hi), denom)
    coords = sorted(set(float(v) for v in values))
    rank = {c: i for i, c in enumerate(coords)}
    lo = [rank[float(v)] for v in y.y_minus]
    hi = [rank[float(v)] for v in y.y_plus]
    return IntervalOrder(np.array(lo), np.array(hi), 1)


def _chain_numerators(P: Poset, weight: Sequence[int]) -> list[int]:
    preds = P.predecessors()
    top = [0] * P.n
    for v in P.topological_order():
        top[v] = max((top[u] for u in preds[v]), default=0) + weight[v]
    return top


def _interval_chain_numerators(I: IntervalOrder, weight: np.ndarray) -> np.ndarray:
    # heaviest chain ending at v: best over u with hi[u] <= lo[v]
    by_lo = np.argsort(I.lo, kind="stable")
    by_hi = np.argsort(I.hi, kind="stable")
    lo, hi = I.lo.tolist(), I.hi.tolist()
    w = weight.tolist()
    top = [0] * I.n
    best = 0
    j = 0
    order_hi = by_hi.tolist()
    for v in by_lo.tolist():
        while j < len(order_hi) and hi[order_hi[j]] <= lo[v]:
            best = max(best, top[order_hi[j]])
            j += 1
        top[v] = best + w[v]
    return np.array(top, dtype=np.int64)


def sort_antichains(I: IntervalOrder, dec: AntichainDecomposition) -> tuple[int, ...]:
    """Order antichains of ``I`` so that ``v <_I w`` only goes to a later set.

    Pairwise overlapping open intervals share a common point, and the largest
    left endpoint of an antichain lies strictly left of that of any antichain
    holding a larger element; sorting by it is therefore always valid.
    """
    lo, hi = I.lo, I.hi
    keys = []
    for i, s in enumerate(dec.sets):
        idx = list(s)
        top_lo, bot_hi = int(lo[idx].max()), int(hi[idx].min())
        if top_lo >= bot_hi:
            raise RuntimeError(f"set {i} of the decomposition is not an antichain")
        keys.append((top_lo, bot_hi, i))
    sigma = tuple(i for _, _, i in sorted(keys))
    _check_layer_order(lo, hi, [dec.sets[i] for i in sigma])
    return sigma


def _check_layer_order(lo: np.ndarray, hi: np.ndarray, layers: Sequence[Sequence[int]]) -> None:
    if not layers:
        return
    max_lo = np.maximum.accumulate([int(lo[list(s)].max()) for s in layers])
    min_hi = np.minimum.accumulate([int(hi[list(s)].min()) for s in layers][::-1])[::-1]
    bad = np.flatnonzero(max_lo[:-1] >= min_hi[1:])
    if len(bad):
        raise RuntimeError(f"no valid antichain order: conflict across boundary {int(bad[0])}")


def decompose_interval_order(I: IntervalOrder) -> AntichainDecomposition:
    """Greedy maximum-antichain decomposition specialized to interval orders."""
    return AntichainDecomposition.from_labels(kernels.interval_greedy(I.lo, I.hi))


def greedy_weak_extension(P: Poset | IntervalOrder) -> GreedyExtension:
    """Extend ``P`` to a weak order through the greedy interval-order step.

    An :class:`IntervalOrder` input skips the dense relation matrix entirely,
    which is how very large interval orders are handled.
    """
    if isinstance(P, IntervalOrder):
        n = P.n
        first = decompose_interval_order(P)
        sizes = np.array(first.sizes, dtype=np.int64)
        weight = sizes[np.array(first.labels(), dtype=np.int64)] if n else np.zeros(0, np.int64)
        top = _interval_chain_numerators(P, weight)
    elif isinstance(P, Poset):
        n = P.n
        first = greedy_antichain_decomposition(P)
        sizes = first.sizes
        weight = [sizes[lab] for lab in first.labels()]
        top = np.array(_chain_numerators(P, weight), dtype=np.int64)
        weight = np.array(weight, dtype=np.int64)
    else:
        raise TypeError("expected a Poset or IntervalOrder")
    if n == 0:
        empty = IntervalOrder(np.zeros(0), np.zeros(0), 1)
        return GreedyExtension(empty, WeakOrder(()), (), first, AntichainDecomposition(()))
    if top.max() > n:
        raise PosetError("greedy point violates a chain inequality")
    interval = IntervalOrder(top - weight, top, n)
    second = decompose_interval_order(interval)
    sigma = sort_antichains(interval, second)
    weak = WeakOrder(tuple(second.sets[i] for i in sigma))
    return GreedyExtension(interval, weak, sigma, first, second)

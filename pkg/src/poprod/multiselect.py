"""Comparison-counted multiple selection and the end-to-end production run."""

from __future__ import annotations

import bisect
import logging
import math
import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .extension import GreedyExtension, greedy_weak_extension
from .poset import IntervalOrder, Poset, WeakOrder

log = logging.getLogger(__name__)

MODES = ("random", "median")


class ComparisonOracle:
    """Hidden total order on ``T = {0..n-1}``; ``hidden[i]`` is the rank of ``t_i``.

    Every distinct question costs one comparison.  With ``memoize`` on, a
    repeated question is answered from the table for free and counted in
    ``repeats`` (and logged when ``debug`` is set).
    """

    def __init__(self, hidden: Sequence[int], memoize: bool = True, debug: bool = False):
        h = np.asarray(hidden, dtype=np.int64)
        if h.ndim != 1 or not np.array_equal(np.sort(h), np.arange(len(h))):
            raise ValueError("hidden order must be a permutation of 0..n-1")
        self.hidden = h
        self.memoize = memoize
        self.debug = debug
        self.count = 0
        self.repeats = 0
        self._asked: set[int] = set()

    @classmethod
    def from_seed(cls, n: int, seed: int | None = None, **kw) -> "ComparisonOracle":
        rng = np.random.default_rng(seed)
        return cls(rng.permutation(n), **kw)

    @property
    def n(self) -> int:
        return len(self.hidden)

    def _key(self, i: int, j: int) -> int:
        return i * self.n + j if i < j else j * self.n + i

    def le(self, i: int, j: int) -> bool:
        """Answer "is t_i <= t_j?"."""
        if i == j:
            return True
        if self.memoize:
            key = self._key(i, j)
            if key in self._asked:
                self.repeats += 1
                if self.debug:
                    log.debug("repeated comparison (%d, %d) answered from memory", i, j)
                return bool(self.hidden[i] <= self.hidden[j])
            self._asked.add(key)
        self.count += 1
        return bool(self.hidden[i] <= self.hidden[j])

    def partition(self, arr: np.ndarray, lo: int, hi: int, pivot_pos: int, backend=None) -> int:
        """Compare every element of ``arr[lo:hi]`` against the pivot in one batch.

        The caller guarantees none of these pairs was asked before; in debug
        mode that is checked and any repeat is moved from ``count`` to
        ``repeats``.
        """
        impl = backend or kernels.active
        if self.debug:
            p = int(arr[pivot_pos])
            keys = [self._key(int(x), p) for x in arr[lo:hi] if int(x) != p]
            dup = sum(k in self._asked for k in keys)
            if dup:
                log.debug("%d repeated comparisons against pivot %d", dup, p)
            self._asked.update(keys)
            self.repeats += dup
            self.count -= dup
        self.count += hi - lo - 1
        return impl.partition(self.hidden, arr, lo, hi, pivot_pos)


def _check_ranks(n: int, ranks: Sequence[int]) -> list[int]:
    r = [int(x) for x in ranks]
    if any(not 1 <= x <= n - 1 for x in r):
        raise ValueError(f"ranks must lie in 1..{n - 1}")
    if any(a >= b for a, b in zip(r, r[1:])):
        raise ValueError("ranks must be strictly increasing")
    return r


def multiselect(
    oracle: ComparisonOracle,
    n: int,
    ranks: Sequence[int],
    mode: str = "random",
    seed: int | None = 0,
    backend=None,
) -> list[list[int]]:
    """Split ``T`` into consecutive blocks at the given cut positions.

    Block ``j`` has ``ranks[j] - ranks[j-1]`` elements and every element of a
    block is below every element of the next one.  ``mode="random"`` uses a
    seeded uniform pivot; ``mode="median"`` a median-of-medians pivot.
    """
    if n != oracle.n:
        raise ValueError("oracle size does not match n")
    cuts = _check_ranks(n, ranks)
    if mode == "random":
        if seed is None:
            seed = random.getrandbits(63)
        arr = _select_random(oracle, n, cuts, seed, backend)
    elif mode == "median":
        arr = _select_median(oracle, n, cuts)
    else:
        raise ValueError(f"unknown pivot mode {mode!r}")
    bounds = [0] + cuts + [n]
    return [sorted(arr[a:b]) for a, b in zip(bounds, bounds[1:])]


_MASK64 = (1 << 64) - 1


def _pivot_offset(seed: int, lo: int, hi: int) -> int:
    # splitmix64 of (seed, lo, hi): a subrange always gets the same pivot, so
    # the recursion for a rank set is a subtree of that for any superset
    z = (seed * 0x9E3779B97F4A7C15 + lo * 0xBF58476D1CE4E5B9 + hi * 0x94D049BB133111EB) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) % (hi - lo)


def _select_random(oracle, n, cuts, seed, backend) -> list[int]:
    arr = np.arange(n, dtype=np.int64)
    stack = [(0, n)]
    while stack:
        lo, hi = stack.pop()
        a = bisect.bisect_right(cuts, lo)
        b = bisect.bisect_left(cuts, hi)
        if a >= b or hi - lo < 2:
            continue
        m = oracle.partition(arr, lo, hi, lo + _pivot_offset(seed, lo, hi), backend)
        # the pivot at m settles the cuts at m and m + 1
        stack.append((m + 1, hi))
        stack.append((lo, m))
    return arr.tolist()


def _insertion_sort(oracle, items: list[int]) -> list[int]:
    out: list[int] = []
    for x in items:
        i = len(out)
        while i > 0 and not oracle.le(out[i - 1], x):
            i -= 1
        out.insert(i, x)
    return out


def _mom_pivot(oracle, items: list[int]) -> int:
    if len(items) <= 5:
        return _insertion_sort(oracle, items)[(len(items) - 1) // 2]
    medians = [
        _insertion_sort(oracle, items[i:i + 5])[(len(items[i:i + 5]) - 1) // 2]
        for i in range(0, len(items), 5)
    ]
    return _select_rank(oracle, medians, (len(medians) - 1) // 2)


def _split(oracle, items: list[int], p: int) -> tuple[list[int], list[int]]:
    small, large = [], []
    for x in items:
        if x != p:
            (small if oracle.le(x, p) else large).append(x)
    return small, large


def _select_rank(oracle, items: list[int], k: int) -> int:
    while True:
        if len(items) <= 5:
            return _insertion_sort(oracle, items)[k]
        p = _mom_pivot(oracle, items)
        small, large = _split(oracle, items, p)
        if k < len(small):
            items = small
        elif k == len(small):
            return p
        else:
            items, k = large, k - len(small) - 1


def _select_median(oracle, n, cuts) -> list[int]:
    out: list[int] = []
    # ranges are emitted left to right, so the stack holds them reversed
    stack: list[tuple[list[int], int]] = [(list(range(n)), 0)]
    while stack:
        items, offset = stack.pop()
        a = bisect.bisect_right(cuts, offset)
        b = bisect.bisect_left(cuts, offset + len(items))
        if a >= b or len(items) < 2:
            out.extend(items)
            continue
        p = _mom_pivot(oracle, items)
        small, large = _split(oracle, items, p)
        m = offset + len(small)
        stack.append((large, m + 1))
        stack.append(([p], m))
        stack.append((small, offset))
    return out


# --------------------------------------------------------------------------- #
# Production
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class Production:
    """``pi[i]`` is the element of ``T`` placed at poset element ``s_i``."""

    pi: tuple[int, ...]
    comparisons: int
    weak: WeakOrder


def prepare(P: Poset | IntervalOrder | WeakOrder) -> WeakOrder:
    """Preprocessing: the weak order whose layers drive the selection."""
    if isinstance(P, WeakOrder):
        return P
    return greedy_weak_extension(P).weak


def produce(
    P: Poset | IntervalOrder | WeakOrder,
    oracle: ComparisonOracle,
    mode: str = "random",
    seed: int | None = 0,
    weak: WeakOrder | GreedyExtension | None = None,
    backend=None,
) -> Production:
    """Arrange ``T`` into ``P`` using only comparisons asked of ``oracle``.

    ``weak`` may carry a precomputed strategy so the preprocessing runs once
    for several data sets.
    """
    if isinstance(weak, GreedyExtension):
        weak = weak.weak
    W = weak if weak is not None else prepare(P)
    n = W.n
    if n != oracle.n:
        raise ValueError("poset and oracle sizes differ")
    before = oracle.count
    blocks = multiselect(oracle, n, W.ranks(), mode, seed, backend) if n else []
    pi = [0] * n
    for layer, block in zip(W.layers, blocks):
        for s, t in zip(layer, block):
            pi[s] = t
    return Production(tuple(pi), oracle.count - before, W)


def verify_production(P: Poset | WeakOrder, hidden: Sequence[int], pi: Sequence[int]) -> bool:
    """True iff ``s_i <= s_j`` implies ``t_pi(i) <= t_pi(j)`` under ``hidden``."""
    h = np.asarray(hidden, dtype=np.int64)
    p = np.asarray(pi, dtype=np.int64)
    if len(h) != len(p) or (isinstance(P, Poset) and P.n != len(p)):
        raise ValueError("sizes differ")
    if sorted(p.tolist()) != list(range(len(p))):
        return False
    placed = h[p]
    if isinstance(P, WeakOrder):
        tops = [placed[list(layer)].max() for layer in P.layers]
        bottoms = [placed[list(layer)].min() for layer in P.layers]
        return all(a < b for a, b in zip(tops, bottoms[1:]))
    return not bool((P.leq & (placed[:, None] > placed[None, :])).any())


def weak_order_bound(W: WeakOrder) -> float:
    """``log2 n! - log2 e(W)`` for a weak order, from log-gamma."""
    lg = math.lgamma(W.n + 1) - sum(math.lgamma(s + 1) for s in W.sizes)
    return lg / math.log(2)

"""Finite posets on ``{0, ..., n-1}`` and the brute-force oracles built on them.

The order relation is kept as a dense boolean matrix ``leq`` (reflexive and
transitively closed) together with the Hasse cover arcs.  Weak orders and
interval orders are thin wrappers that know how to produce their induced
:class:`Poset`.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

#: Largest ``n`` accepted by the exponential oracles.
BRUTE_FORCE_LIMIT = 20


class PosetError(ValueError):
    """Malformed poset input."""


class CycleError(PosetError):
    """The generating relation contains a directed cycle."""

    def __init__(self, cycle: Sequence[int]):
        self.cycle = list(cycle)
        super().__init__("relation has a cycle: " + " -> ".join(map(str, self.cycle + self.cycle[:1])))


class OracleLimitError(ValueError):
    """An exponential-time oracle was called above its size limit."""


def _bits_to_row(mask: int, n: int) -> np.ndarray:
    raw = np.frombuffer(mask.to_bytes((n + 7) // 8 or 1, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].astype(bool)


def _row_to_bits(row: np.ndarray) -> int:
    return int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little")


def _cover_matrix(leq: np.ndarray) -> np.ndarray:
    n = leq.shape[0]
    strict = leq & ~np.eye(n, dtype=bool)
    s = strict.astype(np.float32)
    # (v, w) is a cover iff v < w and no z with v < z < w
    return strict & ~((s @ s) > 0)


@dataclass(frozen=True, eq=False)
class Poset:
    """A partial order given by its reflexive-transitive relation matrix.

    ``leq[v, w]`` is true iff ``v <= w``.  ``covers`` lists the Hasse arcs in
    lexicographic order.  Instances are immutable; build them with
    :func:`from_relations` or :meth:`from_matrix`.
    """

    leq: np.ndarray
    covers: tuple[tuple[int, int], ...]
    _bits: tuple[int, ...] = field(default=(), repr=False)

    @classmethod
    def from_matrix(cls, leq: np.ndarray, check: bool = True) -> "Poset":
        leq = np.array(leq, dtype=bool)
        n = leq.shape[0]
        if leq.shape != (n, n):
            raise PosetError("relation matrix must be square")
        if check:
            if not leq.diagonal().all():
                raise PosetError("relation is not reflexive")
            off = leq & ~np.eye(n, dtype=bool)
            if (off & off.T).any():
                v, w = map(int, np.argwhere(off & off.T)[0])
                raise CycleError([v, w])
            if n and ((off.astype(np.float32) @ off.astype(np.float32) > 0) & ~off).any():
                raise PosetError("relation is not transitive")
        cov = _cover_matrix(leq)
        covers = tuple((int(v), int(w)) for v, w in np.argwhere(cov))
        leq.setflags(write=False)
        return cls(leq, covers, tuple(_row_to_bits(row) for row in leq))

    @property
    def n(self) -> int:
        return self.leq.shape[0]

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poset):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.leq, other.leq))

    def __hash__(self) -> int:
        return hash(self._bits)

    def __repr__(self) -> str:
        return f"Poset(n={self.n}, covers={list(self.covers)})"

    def le(self, v: int, w: int) -> bool:
        return bool(self.leq[v, w])

    def lt(self, v: int, w: int) -> bool:
        return v != w and bool(self.leq[v, w])

    def comparable(self, v: int, w: int) -> bool:
        return bool(self.leq[v, w] or self.leq[w, v])

    def up_mask(self, v: int) -> int:
        """Bitmask of ``{w : v <= w}``."""
        return self._bits[v]

    def down_mask(self, v: int) -> int:
        return _row_to_bits(self.leq[:, v])

    def minimal(self) -> list[int]:
        return [int(v) for v in np.flatnonzero(self.leq.sum(axis=0) == 1)]

    def maximal(self) -> list[int]:
        return [int(v) for v in np.flatnonzero(self.leq.sum(axis=1) == 1)]

    def successors(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for v, w in self.covers:
            out[v].append(w)
        return out

    def predecessors(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for v, w in self.covers:
            out[w].append(v)
        return out

    def topological_order(self) -> list[int]:
        # number of strict predecessors is a linear extension key
        key = self.leq.sum(axis=0)
        return [int(v) for v in np.argsort(key, kind="stable")]

    def is_antichain(self, elements: Iterable[int]) -> bool:
        idx = sorted(elements)
        sub = self.leq[np.ix_(idx, idx)]
        return int(sub.sum()) == len(idx)

    def is_chain(self, elements: Iterable[int]) -> bool:
        idx = sorted(elements)
        sub = self.leq[np.ix_(idx, idx)]
        return bool((sub | sub.T).all())

    def restrict(self, elements: Iterable[int]) -> tuple["Poset", list[int]]:
        """Induced subposet, relabelled to ``0..k-1``; returns it with the label map."""
        idx = sorted(elements)
        return Poset.from_matrix(self.leq[np.ix_(idx, idx)], check=False), idx

    def dual(self) -> "Poset":
        return Poset.from_matrix(self.leq.T.copy(), check=False)

    def comparability_edges(self) -> list[tuple[int, int]]:
        strict = self.leq & ~np.eye(self.n, dtype=bool)
        return [(int(v), int(w)) for v, w in np.argwhere(strict)]


def from_relations(n: int, pairs: Iterable[tuple[int, int]]) -> Poset:
    """Build the poset generated by ``pairs`` (each ``(v, w)`` meaning v <= w).

    Raises :class:`CycleError` carrying the offending cycle when the closure
    is not antisymmetric.
    """
    if n < 0:
        raise PosetError("n must be nonnegative")
    succ: list[set[int]] = [set() for _ in range(n)]
    for v, w in pairs:
        if not (0 <= v < n and 0 <= w < n):
            raise PosetError(f"pair ({v}, {w}) out of range for n={n}")
        if v != w:
            succ[v].add(w)
    indeg = [0] * n
    for v in range(n):
        for w in succ[v]:
            indeg[w] += 1
    order = [v for v in range(n) if indeg[v] == 0]
    head = 0
    while head < len(order):
        v = order[head]
        head += 1
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                order.append(w)
    if len(order) < n:
        raise CycleError(_find_cycle(succ, set(range(n)) - set(order)))

    reach = [0] * n
    for v in reversed(order):
        m = 1 << v
        for w in succ[v]:
            m |= reach[w]
        reach[v] = m
    leq = np.zeros((n, n), dtype=bool)
    for v in range(n):
        leq[v] = _bits_to_row(reach[v], n)
    return Poset.from_matrix(leq, check=False)


def _find_cycle(succ: list[set[int]], alive: set[int]) -> list[int]:
    # every alive node has an alive successor; walk until a repeat
    v = min(alive)
    seen: dict[int, int] = {}
    path: list[int] = []
    while v not in seen:
        seen[v] = len(path)
        path.append(v)
        v = min(w for w in succ[v] if w in alive)
    return path[seen[v]:]


def chain(n: int) -> Poset:
    return Poset.from_matrix(np.triu(np.ones((n, n), dtype=bool)), check=False)


def antichain(n: int) -> Poset:
    return Poset.from_matrix(np.eye(n, dtype=bool), check=False)


def extends(Q: Poset, P: Poset) -> bool:
    """True iff ``Q`` extends ``P``: same ground set and ``<=_P`` implies ``<=_Q``."""
    if Q.n != P.n:
        raise PosetError(f"ground sets differ: {Q.n} vs {P.n}")
    return not bool((P.leq & ~Q.leq).any())


def _check_limit(P: Poset, limit: int | None) -> None:
    limit = BRUTE_FORCE_LIMIT if limit is None else limit
    if P.n > limit:
        raise OracleLimitError(f"oracle limit exceeded: n={P.n} > {limit}")


def count_linear_extensions(P: Poset, limit: int | None = None) -> int:
    """Exact number of linear extensions by dynamic programming over downsets."""
    _check_limit(P, limit)
    n = P.n
    below = [P.down_mask(v) & ~(1 << v) for v in range(n)]
    layer: dict[int, int] = {0: 1}
    for _ in range(n):
        nxt: dict[int, int] = defaultdict(int)
        for down, ways in layer.items():
            for v in range(n):
                bit = 1 << v
                if not down & bit and not below[v] & ~down:
                    nxt[down | bit] += ways
        layer = nxt
    return layer[(1 << n) - 1]


def itlb(P: Poset, limit: int | None = None) -> float:
    """``log2(n!) - log2(e(P))`` in bits."""
    e = count_linear_extensions(P, limit)
    return math.log2(math.factorial(P.n)) - math.log2(e)


def itlb_ceil(P: Poset, limit: int | None = None) -> int:
    """Smallest integer ``c`` with ``2**c >= n!/e(P)``, computed exactly."""
    e = count_linear_extensions(P, limit)
    return ceil_log2_ratio(math.factorial(P.n), e)


def ceil_log2_ratio(num: int, den: int) -> int:
    c = max(0, (num // den).bit_length() - 1)
    while den << c < num:
        c += 1
    while c > 0 and den << (c - 1) >= num:
        c -= 1
    return c


def iter_antichains(P: Poset) -> Iterator[int]:
    """Yield every nonempty antichain of ``P`` as a bitmask."""
    n = P.n
    incomparable_above = []
    for v in range(n):
        comp = P.up_mask(v) | P.down_mask(v)
        incomparable_above.append(~comp & ~((1 << (v + 1)) - 1) & ((1 << n) - 1))

    stack = [(1 << v, incomparable_above[v]) for v in reversed(range(n))]
    while stack:
        mask, cand = stack.pop()
        yield mask
        while cand:
            low = cand & -cand
            w = low.bit_length() - 1
            cand ^= low
            stack.append((mask | low, cand & incomparable_above[w]))


def antichain_matrix(P: Poset, limit: int | None = None) -> np.ndarray:
    """0/1 incidence matrix with one row per nonempty antichain."""
    _check_limit(P, limit)
    masks = list(iter_antichains(P))
    mat = np.zeros((len(masks), P.n), dtype=np.uint8)
    for i, m in enumerate(masks):
        mat[i] = _bits_to_row(m, P.n)
    return mat


def max_antichain_brute(
    P: Poset, weights: Sequence[float] | None = None, limit: int | None = None
) -> tuple[frozenset[int], float]:
    """Maximum-weight antichain by exhaustive enumeration (unit weights by default)."""
    _check_limit(P, limit)
    if P.n == 0:
        return frozenset(), 0
    w = [1] * P.n if weights is None else list(weights)
    if any(x < 0 for x in w):
        raise ValueError("weights must be nonnegative")
    best_mask, best = 0, -1.0
    for mask in iter_antichains(P):
        total = 0
        m = mask
        while m:
            low = m & -m
            total += w[low.bit_length() - 1]
            m ^= low
        if total > best:
            best_mask, best = mask, total
    return frozenset(v for v in range(P.n) if best_mask >> v & 1), best


# --------------------------------------------------------------------------- #
# Weak orders and interval orders
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class WeakOrder:
    """Ordered layers ``A_1 < A_2 < ... < A_k`` partitioning ``0..n-1``."""

    layers: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        layers = tuple(tuple(sorted(int(v) for v in layer)) for layer in self.layers)
        object.__setattr__(self, "layers", layers)
        seen = [v for layer in layers for v in layer]
        if any(not layer for layer in layers):
            raise PosetError("weak order layers must be nonempty")
        if sorted(seen) != list(range(len(seen))):
            raise PosetError("weak order layers must partition 0..n-1")

    @property
    def n(self) -> int:
        return sum(len(layer) for layer in self.layers)

    @property
    def sizes(self) -> list[int]:
        return [len(layer) for layer in self.layers]

    def ranks(self) -> list[int]:
        """Cumulative layer sizes ``r_1 < ... < r_{k-1}`` (the multiselect cuts)."""
        return list(np.cumsum(self.sizes[:-1], dtype=np.int64).tolist()) if self.layers else []

    def layer_index(self) -> np.ndarray:
        idx = np.empty(self.n, dtype=np.int64)
        for i, layer in enumerate(self.layers):
            idx[list(layer)] = i
        return idx

    def to_poset(self) -> Poset:
        idx = self.layer_index()
        leq = (idx[:, None] < idx[None, :]) | np.eye(self.n, dtype=bool)
        return Poset.from_matrix(leq, check=False)

    def linear_extensions(self) -> int:
        return math.prod(math.factorial(s) for s in self.sizes)


@dataclass(frozen=True, eq=False)
class IntervalOrder:
    """Elements as open intervals ``(lo/denom, hi/denom)`` with integer numerators.

    ``v <= w`` iff ``v == w`` or ``hi[v] <= lo[w]``.
    """

    lo: np.ndarray
    hi: np.ndarray
    denom: int = 1

    def __post_init__(self) -> None:
        lo = np.asarray(self.lo, dtype=np.int64)
        hi = np.asarray(self.hi, dtype=np.int64)
        if lo.shape != hi.shape or lo.ndim != 1:
            raise PosetError("endpoint arrays must be 1-d and equal length")
        if (lo >= hi).any():
            raise PosetError("every interval needs left < right")
        if self.denom <= 0:
            raise PosetError("denominator must be positive")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def n(self) -> int:
        return len(self.lo)

    @property
    def left(self) -> list[Fraction]:
        return [Fraction(int(a), self.denom) for a in self.lo]

    @property
    def right(self) -> list[Fraction]:
        return [Fraction(int(b), self.denom) for b in self.hi]

    def lt(self, v: int, w: int) -> bool:
        return v != w and self.hi[v] <= self.lo[w]

    def to_poset(self) -> Poset:
        leq = (self.hi[:, None] <= self.lo[None, :]) | np.eye(self.n, dtype=bool)
        return Poset.from_matrix(leq, check=False)


def has_induced_2plus2(P: Poset) -> bool:
    """True iff some ``a < b``, ``c < d`` have ``a, d`` and ``c, b`` incomparable."""
    strict = P.leq & ~np.eye(P.n, dtype=bool)
    pairs = np.argwhere(strict)
    for a, b in pairs:
        for c, d in pairs:
            if not P.comparable(a, d) and not P.comparable(c, b):
                return True
    return False


# --------------------------------------------------------------------------- #
# Text format
# --------------------------------------------------------------------------- #


def parse_poset(text: str) -> Poset:
    """Parse ``n <count>`` followed by ``v w`` lines; ``#`` starts a comment."""
    n: int | None = None
    pairs: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if n is None:
            if len(tok) != 2 or tok[0] != "n":
                raise PosetError(f"line {lineno}: expected 'n <count>'")
            try:
                n = int(tok[1])
            except ValueError:
                raise PosetError(f"line {lineno}: bad count {tok[1]!r}") from None
            continue
        if len(tok) != 2:
            raise PosetError(f"line {lineno}: expected 'v w'")
        try:
            pairs.append((int(tok[0]), int(tok[1])))
        except ValueError:
            raise PosetError(f"line {lineno}: non-integer element") from None
    if n is None:
        raise PosetError("missing 'n <count>' header")
    return from_relations(n, pairs)


def format_poset(P: Poset, comment: str | None = None) -> str:
    lines = [f"# {comment}"] if comment else []
    lines.append(f"n {P.n}")
    lines.extend(f"{v} {w}" for v, w in P.covers)
    return "\n".join(lines) + "\n"

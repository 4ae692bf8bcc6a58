"""Poset families, the G_k tightness family and the benchmark runner."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import asdict, dataclass, field, fields
from functools import lru_cache
from typing import Sequence

import numpy as np

from .entropy import entropy_exact, entropy_of_sizes, point_entropy
from .extension import greedy_weak_extension
from .multiselect import ComparisonOracle, produce, verify_production, weak_order_bound
from .poset import (
    BRUTE_FORCE_LIMIT,
    IntervalOrder,
    Poset,
    WeakOrder,
    antichain,
    chain,
    count_linear_extensions,
    from_relations,
)

LOG2E = math.log2(math.e)
GK_MAX_LEVEL = 20
#: Entropy is computed exactly (Frank-Wolfe) up to this size in reports.
EXACT_ENTROPY_LIMIT = 14

FAMILIES = ("chain", "antichain", "selection", "multiselection", "heap", "random", "gk")


class FamilyError(ValueError):
    pass


def weak_from_sizes(sizes: Sequence[int]) -> WeakOrder:
    layers, start = [], 0
    for s in sizes:
        if s <= 0:
            raise FamilyError("layer sizes must be positive")
        layers.append(tuple(range(start, start + s)))
        start += s
    return WeakOrder(tuple(layers))


def selection_weak(n: int, k: int) -> WeakOrder:
    """k-th smallest of n: layers ``(k-1, 1, n-k)``, empty layers dropped."""
    if not 1 <= k <= n:
        raise FamilyError(f"selection needs 1 <= k <= n, got k={k}, n={n}")
    return weak_from_sizes([s for s in (k - 1, 1, n - k) if s])


def multiselection_weak(n: int, ranks: Sequence[int]) -> WeakOrder:
    r = sorted(set(int(x) for x in ranks))
    if any(not 1 <= x <= n - 1 for x in r):
        raise FamilyError(f"ranks must lie in 1..{n - 1}")
    bounds = [0] + r + [n]
    return weak_from_sizes([b - a for a, b in zip(bounds, bounds[1:])])


def equal_layers(n: int, k: int) -> WeakOrder:
    """``k`` layers whose sizes differ by at most one."""
    if not 1 <= k <= n:
        raise FamilyError("need 1 <= k <= n")
    return multiselection_weak(n, [(i * n) // k for i in range(1, k)])


def heap(depth: int) -> Poset:
    """Complete binary tree with ``depth`` levels, each parent below its children."""
    if depth < 1:
        raise FamilyError("heap depth must be >= 1")
    n = 2 ** depth - 1
    return from_relations(n, [(i, c) for i in range(n) for c in (2 * i + 1, 2 * i + 2) if c < n])


def random_poset(n: int, p: float, seed: int | None = 0) -> Poset:
    """Closure of a random DAG: each pair of a shuffled order is an edge w.p. ``p``."""
    if n < 0 or not 0 <= p <= 1:
        raise FamilyError("random poset needs n >= 0 and 0 <= p <= 1")
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    upper = np.triu(rng.random((n, n)) < p, 1)
    src, dst = np.nonzero(upper)
    return from_relations(n, zip(order[src].tolist(), order[dst].tolist()))


def gen_family(kind: str, n: int | None = None, k: int | None = None,
               ranks: Sequence[int] | None = None, depth: int | None = None,
               p: float | None = None, seed: int | None = 0) -> Poset:
    """Build a named poset family (see :data:`FAMILIES`)."""
    try:
        if kind == "chain":
            return chain(_need(n, "n"))
        if kind == "antichain":
            return antichain(_need(n, "n"))
        if kind == "selection":
            return selection_weak(_need(n, "n"), _need(k, "k")).to_poset()
        if kind == "multiselection":
            return multiselection_weak(_need(n, "n"), ranks or []).to_poset()
        if kind == "heap":
            return heap(_need(depth, "depth"))
        if kind == "random":
            return random_poset(_need(n, "n"), 0.3 if p is None else p, seed)
        if kind == "gk":
            return gen_gk(_need(k, "k")).interval.to_poset()
    except FamilyError:
        raise
    except ValueError as exc:
        raise FamilyError(str(exc)) from exc
    raise FamilyError(f"unknown family {kind!r}; choose from {', '.join(FAMILIES)}")


def _need(value, name):
    if value is None:
        raise FamilyError(f"parameter {name} is required")
    if value < 0:
        raise FamilyError(f"parameter {name} must be nonnegative")
    return value


# --------------------------------------------------------------------------- #
# G_k
# --------------------------------------------------------------------------- #


@dataclass(frozen=True, eq=False)
class GkFamily:
    """Interval representation of ``G_k``.

    ``group[v]`` identifies the central clique ``v`` belongs to in the
    recursive construction (one per recursion node).  ``interval`` is ``I_k``,
    whose comparability graph is the complement of ``G_k``.
    """

    k: int
    lo: np.ndarray
    hi: np.ndarray
    group: np.ndarray
    level: np.ndarray

    @property
    def n(self) -> int:
        return len(self.lo)

    @property
    def interval(self) -> IntervalOrder:
        return IntervalOrder(self.lo, self.hi, 1)


@lru_cache(maxsize=None)
def _gk_arrays(k: int):
    if k == 1:
        one = np.zeros(1, dtype=np.int64)
        return one, one + 1, one, one + 1, 1, 1
    lo1, hi1, g1, lev1, ng, width = _gk_arrays(k - 1)
    half = 2 ** (k - 2)
    shift = width + 2
    lo = np.concatenate([lo1, lo1 + shift, np.zeros(half, np.int64), np.full(half, width, np.int64)])
    hi = np.concatenate([hi1, hi1 + shift, np.full(half, shift, np.int64), np.full(half, 2 * width + 2, np.int64)])
    group = np.concatenate([g1, g1 + ng, np.full(2 * half, 2 * ng, np.int64)])
    level = np.concatenate([lev1 + 1, lev1 + 1, np.ones(2 * half, np.int64)])
    return lo, hi, group, level, 2 * ng + 1, 2 * width + 2


def gen_gk(k: int) -> GkFamily:
    """The recursive interval graph ``G_k`` on ``k * 2**(k-1)`` vertices.

    ``G_{k-1}`` copies sit side by side; half of the central clique spans the
    first copy and overlaps the other half, which spans the second copy.
    """
    if k < 1:
        raise FamilyError("k must be >= 1")
    if k > GK_MAX_LEVEL:
        raise FamilyError(f"k={k} would need {k * 2 ** (k - 1)} vertices; limit is k <= {GK_MAX_LEVEL}")
    lo, hi, group, level, _, _ = _gk_arrays(k)
    return GkFamily(k, lo, hi, group, level)


def gk_recursive_coloring(fam: GkFamily) -> list[list[int]]:
    """Colour classes of the complement of ``G_k``: one per central clique, top level first."""
    order = np.lexsort((np.arange(fam.n), fam.group, fam.level))
    classes: dict[int, list[int]] = {}
    for v in order.tolist():
        classes.setdefault(int(fam.group[v]), []).append(v)
    return list(classes.values())


def interval_maximal_cliques(lo: np.ndarray, hi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Maximal cliques of an open-interval graph.

    Returns ``(sizes, membership)`` where ``membership[v]`` counts the
    maximal cliques containing interval ``v``.  A maximal clique sits on each
    elementary segment that starts at some left endpoint and ends at some
    right endpoint.
    """
    coords = np.unique(np.concatenate([lo, hi]))
    a = np.searchsorted(coords, lo)
    b = np.searchsorted(coords, hi)
    nseg = len(coords) - 1
    depth = np.zeros(nseg + 1, dtype=np.int64)
    np.add.at(depth, a, 1)
    np.add.at(depth, b, -1)
    depth = np.cumsum(depth)[:nseg]
    opens = np.zeros(len(coords), dtype=bool)
    opens[a] = True
    closes = np.zeros(len(coords), dtype=bool)
    closes[b] = True
    maximal = opens[:nseg] & closes[1:]
    prefix = np.concatenate([[0], np.cumsum(maximal)])
    membership = prefix[b] - prefix[a]
    return depth[maximal], membership


def gk_upper_point_entropy(fam: GkFamily) -> float:
    """Entropy of the uniform mixture of all maximal antichains of ``I_k``."""
    sizes, membership = interval_maximal_cliques(fam.lo, fam.hi)
    count = len(sizes)
    value = point_entropy(membership / count)
    if value > (fam.k + 1) / 2 + 1e-9:
        raise AssertionError(f"upper point entropy {value} exceeds (k+1)/2")
    return value


def gk_upper_point_entropy_formula(k: int) -> float:
    return math.log2(2 ** k - 1) - (k - 1) / 2


def gk_coloring_entropy_formula(k: int) -> float:
    return (k - 1) / 2 + math.log2(k)


# --------------------------------------------------------------------------- #
# Benchmarks
# --------------------------------------------------------------------------- #


@dataclass
class BenchRow:
    family: str
    n: int
    trial: int
    seed: int
    comparisons: int
    itlb: float
    itlb_kind: str
    itlb_low: float
    itlb_high: float
    nH_P: float
    entropy_kind: str
    nH_W: float
    B: float
    preprocess_s: float
    ordering_s: float
    verified: bool


CSV_COLUMNS = [f.name for f in fields(BenchRow)]


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in asdict(row).items()})
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps([asdict(r) for r in self.rows], indent=1)

    @classmethod
    def from_csv(cls, text: str) -> "BenchReport":
        types = {f.name: f.type for f in fields(BenchRow)}
        rows = []
        for rec in csv.DictReader(io.StringIO(text)):
            vals = {}
            for k, v in rec.items():
                t = types[k]
                vals[k] = int(v) if t == "int" else float(v) if t == "float" else (v == "True") if t == "bool" else v
            rows.append(BenchRow(**vals))
        return cls(rows)

    @classmethod
    def from_json(cls, text: str) -> "BenchReport":
        return cls([BenchRow(**r) for r in json.loads(text)])


def parse_family_spec(spec: str) -> tuple[str, Poset | IntervalOrder | WeakOrder]:
    """``chain:8``, ``antichain:100``, ``heap:3``, ``random:30:0.2[:seed]``,
    ``selection:9:3``, ``multiselection:20:5,10,15``, ``layers:1000:10``
    (equal layers), ``gk:4``."""
    parts = spec.split(":")
    kind, args = parts[0], parts[1:]
    try:
        if kind in ("chain", "antichain") and len(args) == 1:
            return spec, gen_family(kind, n=int(args[0]))
        if kind == "heap" and len(args) == 1:
            return spec, heap(int(args[0]))
        if kind == "random" and len(args) in (2, 3):
            seed = int(args[2]) if len(args) == 3 else 0
            return spec, random_poset(int(args[0]), float(args[1]), seed)
        if kind == "selection" and len(args) == 2:
            return spec, selection_weak(int(args[0]), int(args[1]))
        if kind == "multiselection" and len(args) == 2:
            return spec, multiselection_weak(int(args[0]), [int(r) for r in args[1].split(",") if r])
        if kind == "layers" and len(args) == 2:
            return spec, equal_layers(int(args[0]), int(args[1]))
        if kind == "gk" and len(args) == 1:
            return spec, gen_gk(int(args[0])).interval
    except ValueError as exc:
        raise FamilyError(f"bad family spec {spec!r}: {exc}") from exc
    raise FamilyError(f"bad family spec {spec!r}")


def _as_poset(target) -> Poset | None:
    if isinstance(target, Poset):
        return target
    if target.n <= BRUTE_FORCE_LIMIT:
        return target.to_poset()
    return None


def bench(specs: Sequence[str], trials: int = 5, seed: int = 0, mode: str = "random") -> BenchReport:
    """Run ``produce`` on each family for ``trials`` hidden orders.

    ITLB is exact when ``n`` is within the brute-force limit; otherwise it is
    estimated as ``n H`` with the band ``[nH - n log2 e, nH]``.  ``H`` is the
    Frank-Wolfe value up to :data:`EXACT_ENTROPY_LIMIT` elements, then the
    greedy-point entropy (an upper proxy).
    """
    report = BenchReport()
    for spec in specs:
        label, target = parse_family_spec(spec)
        n = target.n
        t0 = time.perf_counter()
        if isinstance(target, WeakOrder):
            weak, greedy_h = target, entropy_of_sizes(target.sizes)
        else:
            ext = greedy_weak_extension(target)
            weak, greedy_h = ext.weak, ext.greedy_entropy
        preprocess = time.perf_counter() - t0

        P = _as_poset(target)
        if isinstance(target, WeakOrder):
            h, h_kind = entropy_of_sizes(target.sizes), "exact"
        elif P is not None and 0 < n <= EXACT_ENTROPY_LIMIT:
            h, h_kind = entropy_exact(P).value, "exact"
        else:
            h, h_kind = greedy_h, "greedy"
        band = (max(0.0, n * h - n * LOG2E), n * h)
        if isinstance(target, WeakOrder):
            itlb_val, kind = weak_order_bound(target), "exact"
            band = (itlb_val, itlb_val)
        elif P is not None and n <= BRUTE_FORCE_LIMIT:
            e = count_linear_extensions(P)
            itlb_val, kind = math.log2(math.factorial(n)) - math.log2(e), "exact"
            band = (itlb_val, itlb_val)
        else:
            itlb_val, kind = n * h, "estimate"
        B = weak_order_bound(weak)
        nHW = n * entropy_of_sizes(weak.sizes)

        for trial in range(trials):
            tseed = seed + trial
            oracle = ComparisonOracle.from_seed(n, tseed)
            t1 = time.perf_counter()
            prod = produce(target, oracle, mode=mode, seed=tseed, weak=weak)
            ordering = time.perf_counter() - t1
            ok = verify_production(P if P is not None else weak, oracle.hidden, prod.pi)
            report.rows.append(BenchRow(
                label, n, trial, tseed, oracle.count, itlb_val, kind, band[0], band[1],
                n * h, h_kind, nHW, B, preprocess, ordering, ok,
            ))
    return report


def small_corpus(max_n: int = 7, random_count: int = 80, seed: int = 0) -> list[tuple[str, Poset]]:
    """Every named family up to ``max_n`` elements plus seeded random posets."""
    out: list[tuple[str, Poset]] = []
    for n in range(1, max_n + 1):
        out.append((f"chain:{n}", chain(n)))
        out.append((f"antichain:{n}", antichain(n)))
        for k in range(1, n + 1):
            out.append((f"selection:{n}:{k}", selection_weak(n, k).to_poset()))
        for mask in range(1, 2 ** (n - 1) - 1):
            ranks = [r for r in range(1, n) if mask >> (r - 1) & 1]
            out.append((f"multiselection:{n}:{','.join(map(str, ranks))}",
                        multiselection_weak(n, ranks).to_poset()))
    depth = 1
    while 2 ** depth - 1 <= max_n:
        out.append((f"heap:{depth}", heap(depth)))
        depth += 1
    k = 1
    while k * 2 ** (k - 1) <= max_n:
        out.append((f"gk:{k}", gen_gk(k).interval.to_poset()))
        k += 1
    rng = np.random.default_rng(seed)
    for i in range(random_count):
        n = int(rng.integers(2, max_n + 1))
        p = float(rng.choice([0.1, 0.2, 0.3, 0.5, 0.7]))
        s = int(rng.integers(2 ** 31))
        out.append((f"random:{n}:{p}:{s}", random_poset(n, p, s)))
    return out

"""Quick invariant sweep used by ``poprod selfcheck``."""

from __future__ import annotations

import itertools
import math
import sys
from typing import TextIO

import numpy as np

from .entropy import entropy_exact, potential_from_point, weak_order_entropy
from .extension import greedy_weak_extension
from .flow import greedy_antichain_decomposition
from .harness import random_poset, small_corpus
from .multiselect import ComparisonOracle, produce, verify_production
from .poset import extends, itlb_ceil, max_antichain_brute


def _decomposition_is_greedy(P) -> bool:
    dec = greedy_antichain_decomposition(P)
    alive = set(range(P.n))
    for s in dec.sets:
        sub, _ = P.restrict(alive)
        if not P.is_antichain(s) or len(s) != max_antichain_brute(sub)[1]:
            return False
        alive -= set(s)
    return not alive


def run_selfcheck(seed: int = 0, size: int = 60, out: TextIO = sys.stdout) -> int:
    corpus = small_corpus(max_n=6, random_count=size, seed=seed)
    checks = {
        "extension chain P <= I <= W": lambda P: (
            lambda g: extends(g.interval.to_poset(), P) and extends(g.weak.to_poset(), g.interval.to_poset())
        )(greedy_weak_extension(P)),
        "greedy decomposition is maximum": _decomposition_is_greedy,
        "greedy point admits a potential": lambda P: potential_from_point(
            P, greedy_weak_extension(P).point).is_valid_for(P),
        "production sound, worst case above ITLB": _production_ok,
    }
    failures = 0
    for name, check in checks.items():
        bad = [label for label, P in corpus if not check(P)]
        failures += len(bad)
        out.write(f"{'PASS' if not bad else 'FAIL'} {name} ({len(corpus)} posets)\n")
        for label in bad[:5]:
            out.write(f"    failed on {label}\n")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(5):
        n = int(rng.integers(4, 11))
        P = random_poset(n, 0.3, int(rng.integers(2 ** 31)))
        total = entropy_exact(P).value + entropy_exact(P, "complement").value
        worst = max(worst, abs(total - math.log2(n)))
    ok = worst <= 2e-3
    failures += not ok
    out.write(f"{'PASS' if ok else 'FAIL'} complementary entropies sum to log2 n (max err {worst:.2e})\n")
    return failures


def _production_ok(P) -> bool:
    weak = greedy_weak_extension(P).weak
    floor = itlb_ceil(P)
    perms = itertools.permutations(range(P.n)) if P.n <= 5 else (
        np.random.default_rng(P.n).permutation(P.n) for _ in range(50))
    worst = 0
    for hidden in perms:
        oracle = ComparisonOracle(hidden)
        prod = produce(P, oracle, weak=weak)
        if not verify_production(P, hidden, prod.pi):
            return False
        worst = max(worst, prod.comparisons)
    return worst >= floor

import itertools
import logging
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from poprod import kernels
from poprod.harness import equal_layers, multiselection_weak
from poprod.multiselect import (
    ComparisonOracle,
    multiselect,
    prepare,
    produce,
    verify_production,
    weak_order_bound,
)
from poprod.poset import WeakOrder, antichain, chain, count_linear_extensions, itlb_ceil


def hidden_of(sorted_t):
    """Hidden ranks from the list of T-indices in increasing order."""
    h = [0] * len(sorted_t)
    for r, t in enumerate(sorted_t):
        h[t] = r
    return h


@st.composite
def selection_cases(draw, max_n=40):
    n = draw(st.integers(1, max_n))
    ranks = sorted(draw(st.sets(st.integers(1, max(1, n - 1)), max_size=n))) if n > 1 else []
    hidden = draw(st.permutations(range(n)))
    return n, ranks, list(hidden)


class TestOracle:
    def test_counts_distinct_pairs(self):
        o = ComparisonOracle([2, 0, 1])
        assert o.le(1, 2) and not o.le(0, 1)
        assert o.le(2, 1) is False
        assert o.count == 2 and o.repeats == 1
        assert o.le(0, 0) and o.count == 2

    def test_without_memo_every_query_counts(self):
        o = ComparisonOracle([0, 1], memoize=False)
        o.le(0, 1)
        o.le(1, 0)
        assert o.count == 2 and o.repeats == 0

    def test_debug_flags_repeats(self, caplog):
        o = ComparisonOracle([1, 0, 2], debug=True)
        with caplog.at_level(logging.DEBUG, logger="poprod.multiselect"):
            o.le(0, 1)
            o.le(1, 0)
        assert "repeated comparison" in caplog.text
        arr = np.arange(3, dtype=np.int64)
        with caplog.at_level(logging.DEBUG, logger="poprod.multiselect"):
            o.partition(arr, 0, 3, 0)
        # (0, 1) was already asked, only (0, 2) is new
        assert o.count == 2 and o.repeats == 2
        assert "repeated comparisons against pivot" in caplog.text

    def test_rejects_non_permutation(self):
        with pytest.raises(ValueError):
            ComparisonOracle([0, 0, 1])

    @given(st.permutations(range(9)), st.integers(0, 8))
    def test_partition_is_stable_split(self, hidden, pos):
        o = ComparisonOracle(hidden)
        arr = np.arange(9, dtype=np.int64)
        m = o.partition(arr, 0, 9, pos)
        p = int(arr[m])
        assert p == pos and o.count == 8
        h = o.hidden
        assert all(h[x] < h[p] for x in arr[:m]) and all(h[x] > h[p] for x in arr[m + 1:])
        assert list(arr[:m]) == sorted(arr[:m])


class TestMultiselect:
    def test_no_ranks(self):
        o = ComparisonOracle([3, 1, 0, 2])
        assert multiselect(o, 4, []) == [[0, 1, 2, 3]]
        assert o.count == 0

    @pytest.mark.parametrize("mode", ["random", "median"])
    def test_full_sort_of_three(self, mode):
        worst = 0
        for hidden in itertools.permutations(range(3)):
            o = ComparisonOracle(hidden)
            blocks = multiselect(o, 3, [1, 2], mode=mode)
            assert [b[0] for b in blocks] == [hidden.index(r) for r in range(3)]
            worst = max(worst, o.count)
        assert worst >= 3

    @pytest.mark.parametrize("mode", ["random", "median"])
    def test_median_of_five(self, mode):
        worst = 0
        for hidden in itertools.permutations(range(5)):
            o = ComparisonOracle(hidden)
            blocks = multiselect(o, 5, [2, 3], mode=mode)
            assert [len(b) for b in blocks] == [2, 1, 2]
            assert sorted(hidden[t] for t in blocks[0]) == [0, 1]
            assert hidden[blocks[1][0]] == 2
            worst = max(worst, o.count)
        assert worst >= math.ceil(math.log2(30))

    def test_single_lucky_run_may_beat_the_bound(self):
        # a pivot that lands on the median sorts three items with two questions
        seen = set()
        for seed in range(50):
            o = ComparisonOracle([0, 1, 2])
            multiselect(o, 3, [1, 2], seed=seed)
            seen.add(o.count)
        assert min(seen) == 2 and max(seen) == 3

    @pytest.mark.parametrize("mode", ["random", "median"])
    @given(case=selection_cases())
    def test_blocks_are_separated(self, mode, case):
        n, ranks, hidden = case
        o = ComparisonOracle(hidden)
        blocks = multiselect(o, n, ranks, mode=mode, seed=3)
        bounds = [0] + ranks + [n]
        assert [len(b) for b in blocks] == [b - a for a, b in zip(bounds, bounds[1:])]
        assert sorted(t for b in blocks for t in b) == list(range(n))
        for a, b in zip(blocks, blocks[1:]):
            assert max(hidden[t] for t in a) < min(hidden[t] for t in b)

    @given(case=selection_cases(), extra=st.sets(st.integers(1, 39)), seed=st.integers(0, 2 ** 20))
    def test_cost_monotone_in_rank_set(self, case, extra, seed):
        n, ranks, hidden = case
        more = sorted(set(ranks) | {r for r in extra if r < n})
        a, b = ComparisonOracle(hidden), ComparisonOracle(hidden)
        multiselect(a, n, ranks, seed=seed)
        multiselect(b, n, more, seed=seed)
        assert b.count >= a.count

    @given(case=selection_cases(max_n=60))
    def test_random_mode_never_repeats_a_question(self, case):
        n, ranks, hidden = case
        o = ComparisonOracle(hidden, debug=True)
        multiselect(o, n, ranks, seed=1)
        assert o.repeats == 0

    def test_median_mode_memoizes(self):
        o = ComparisonOracle.from_seed(2000, 4)
        multiselect(o, 2000, list(range(100, 2000, 100)), mode="median")
        assert o.repeats > 0
        assert o.count == len(o._asked)

    @pytest.mark.parametrize("ranks", [[0], [3], [2, 2], [2, 1]])
    def test_bad_ranks(self, ranks):
        with pytest.raises(ValueError):
            multiselect(ComparisonOracle([0, 1, 2]), 3, ranks)

    def test_bad_mode_and_size(self):
        with pytest.raises(ValueError):
            multiselect(ComparisonOracle([0, 1]), 2, [1], mode="quick")
        with pytest.raises(ValueError):
            multiselect(ComparisonOracle([0, 1]), 3, [1])

    @pytest.mark.skipif(kernels.compiled_backend is None, reason="compiled kernels not built")
    def test_backends_agree(self):
        for seed in range(5):
            outs = []
            for backend in (kernels.python_backend, kernels.compiled_backend):
                o = ComparisonOracle.from_seed(3000, seed)
                outs.append((multiselect(o, 3000, [10, 1500, 2990], seed=seed, backend=backend), o.count))
            assert outs[0] == outs[1]


class TestProduce:
    def test_antichain_is_free(self):
        o = ComparisonOracle.from_seed(50, 0)
        prod = produce(antichain(50), o)
        assert prod.comparisons == 0
        assert verify_production(antichain(50), o.hidden, prod.pi)

    def test_chain_sorts(self):
        for hidden in itertools.permutations(range(3)):
            prod = produce(chain(3), ComparisonOracle(hidden))
            assert [hidden[t] for t in prod.pi] == [0, 1, 2]

    def test_v_gets_minimum_at_root(self, vposet):
        for hidden in itertools.permutations(range(3)):
            prod = produce(vposet, ComparisonOracle(hidden))
            assert hidden[prod.pi[0]] == 0
            assert verify_production(vposet, hidden, prod.pi)

    @pytest.mark.parametrize("mode", ["random", "median"])
    def test_n_poset_exhaustive(self, nposet, mode):
        floor = itlb_ceil(nposet)
        worst = 0
        for hidden in itertools.permutations(range(4)):
            o = ComparisonOracle(hidden)
            prod = produce(nposet, o, mode=mode)
            assert verify_production(nposet, hidden, prod.pi)
            worst = max(worst, prod.comparisons)
        assert worst >= floor

    def test_accepts_weak_order_and_precomputed_strategy(self, vposet):
        W = prepare(vposet)
        o = ComparisonOracle([2, 0, 1])
        prod = produce(vposet, o, weak=W)
        assert prod.weak == W and verify_production(vposet, o.hidden, prod.pi)
        prod = produce(W, ComparisonOracle([2, 0, 1]))
        assert verify_production(W, [2, 0, 1], prod.pi)

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            produce(chain(3), ComparisonOracle([0, 1]))

    def test_reported_count_excludes_earlier_questions(self):
        o = ComparisonOracle.from_seed(6, 1)
        o.le(0, 1)
        prod = produce(chain(6), o)
        assert prod.comparisons == o.count - 1


class TestVerify:
    def test_chain2(self):
        assert verify_production(chain(2), [0, 1], [0, 1])
        assert not verify_production(chain(2), [1, 0], [0, 1])

    def test_antichain_anything_goes(self):
        assert verify_production(antichain(3), [2, 0, 1], [1, 2, 0])

    def test_sorting_permutation(self):
        hidden = [3, 0, 2, 1]
        assert verify_production(chain(4), hidden, [1, 3, 2, 0])

    def test_rejects_non_permutation_pi(self):
        assert not verify_production(chain(2), [0, 1], [0, 0])

    def test_weak_order_check(self):
        W = WeakOrder(((0, 1), (2,)))
        assert verify_production(W, [2, 1, 0], [2, 1, 0])
        assert not verify_production(W, [2, 1, 0], [0, 1, 2])


class TestBound:
    @pytest.mark.parametrize("sizes", [[1, 1, 1], [2, 1, 2], [3, 3], [1, 5, 2, 2]])
    def test_closed_form_matches_counting(self, sizes):
        W = multiselection_weak(sum(sizes), list(np.cumsum(sizes[:-1])))
        e = count_linear_extensions(W.to_poset())
        assert weak_order_bound(W) == pytest.approx(math.log2(math.factorial(W.n) / e))

    def test_large_equal_layers(self):
        W = equal_layers(100000, 10)
        assert weak_order_bound(W) == pytest.approx(332122.74, abs=0.01)

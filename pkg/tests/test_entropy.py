import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from conftest import posets
from hypothesis import given
from hypothesis import strategies as st

from poprod.entropy import (
    MembershipError,
    Potential,
    chain_inequalities_hold,
    coloring_entropy,
    entropy_exact,
    entropy_of_sizes,
    greedy_chain_decomposition,
    greedy_point,
    point_entropy,
    potential_from_point,
    weak_order_entropy,
)
from poprod.flow import AntichainDecomposition, greedy_antichain_decomposition
from poprod.harness import random_poset
from poprod.poset import OracleLimitError, WeakOrder, antichain, chain, from_relations

# Reference entropies from a conic solver over the clique constraints of the
# comparability graph and of its complement (both perfect).
CONIC_REFERENCE = [
    (4, [(0, 2), (0, 3)], 0.688722, 1.311278),
    (5, [(1, 0), (2, 0)], 0.550978, 1.770951),
    (5, [(0, 3), (1, 0), (1, 4), (2, 0), (2, 3), (4, 3)], 1.521928, 0.800000),
    (6, [(1, 0), (1, 2), (1, 3), (1, 4), (4, 0), (5, 3)], 1.207519, 1.377444),
    (9, [(2, 1), (2, 7), (3, 1), (3, 2), (5, 2), (6, 8), (8, 1), (8, 2)], 1.294609, 1.875316),
    (9, [(1, 5), (2, 0), (3, 1), (3, 4), (3, 8), (4, 0), (4, 2), (4, 5), (6, 5), (7, 1),
         (7, 3), (7, 8), (8, 0), (8, 1), (8, 4), (8, 5)], 2.179233, 0.990692),
    (9, [(2, 1), (3, 1), (4, 1), (5, 1), (5, 2), (5, 8), (6, 0), (6, 1), (6, 7), (7, 0),
         (7, 4), (8, 0)], 1.554632, 1.615293),
]


def max_chain_weight(P, x):
    """Heaviest chain by enumerating every chain."""
    best = 0
    for r in range(1, P.n + 1):
        for c in itertools.combinations(range(P.n), r):
            if P.is_chain(c):
                best = max(best, sum(x[v] for v in c))
    return best


class TestGreedyPoint:
    def test_examples(self, vposet):
        p = greedy_point(AntichainDecomposition(((0, 1, 2, 3, 4),)), 5)
        assert p.x == (1,) * 5 and p.entropy == 0
        p = greedy_point(AntichainDecomposition(((0,), (1,))), 2)
        assert p.x == (Fraction(1, 2),) * 2 and p.entropy == pytest.approx(1)
        p = greedy_point(greedy_antichain_decomposition(vposet), 3)
        assert p.x == (Fraction(1, 3), Fraction(2, 3), Fraction(2, 3))
        assert p.entropy == pytest.approx(math.log2(3) - 2 / 3)

    def test_entropy_matches_point_formula(self, nposet):
        p = greedy_point(greedy_antichain_decomposition(nposet), 4)
        assert p.entropy == pytest.approx(point_entropy([float(v) for v in p.x]))

    def test_rejects_partial_cover(self):
        with pytest.raises(ValueError):
            greedy_point(AntichainDecomposition(((0,), (0, 1))), 2)


class TestPotential:
    def test_examples(self, vposet):
        y = potential_from_point(antichain(2), [1, 1])
        assert y.y_minus == (0, 0) and y.y_plus == (1, 1)
        y = potential_from_point(chain(2), [Fraction(1, 2)] * 2)
        assert y.node_vector()[:4] == [0, Fraction(1, 2), Fraction(1, 2), 1]
        third = Fraction(1, 3)
        y = potential_from_point(vposet, [third, 2 * third, 2 * third])
        assert y.y_minus == (0, third, third) and y.y_plus == (third, 1, 1)

    @given(posets(max_n=8))
    def test_greedy_point_always_admits_potential(self, P):
        x = greedy_point(greedy_antichain_decomposition(P), P.n)
        y = potential_from_point(P, x)
        assert y.is_valid_for(P)
        assert all(b - a == xv for a, b, xv in zip(y.y_minus, y.y_plus, x.x))

    @given(posets(max_n=7), st.integers(0, 2 ** 16))
    def test_membership_iff_chain_inequalities(self, P, seed):
        # perturbed greedy points land on both sides of the boundary
        rng = np.random.default_rng(seed)
        base = greedy_point(greedy_antichain_decomposition(P), P.n).x
        x = [v * Fraction(int(rng.integers(80, 121)), 100) for v in base]
        inside = max_chain_weight(P, x) <= 1
        assert chain_inequalities_hold(P, x) == inside
        if inside:
            assert potential_from_point(P, x).is_valid_for(P)
        else:
            with pytest.raises(MembershipError):
                potential_from_point(P, x)

    def test_invalid_potential_detected(self, vposet):
        # b- sits 1/12 below a+
        y = Potential((0, Fraction(1, 4), Fraction(1, 3)), (Fraction(1, 3), 1, 1))
        assert not y.is_valid_for(vposet)
        assert y.is_valid_for(vposet, tol=0.1)

    def test_negative_coordinate(self):
        with pytest.raises(MembershipError):
            potential_from_point(antichain(2), [1, -1])


class TestColoringEntropy:
    def test_examples(self):
        assert coloring_entropy([[0, 1, 2]], 3) == 0
        assert coloring_entropy([[0], [1], [2], [3]], 4) == pytest.approx(2)
        assert weak_order_entropy(WeakOrder(((0, 1, 2),))) == 0
        assert weak_order_entropy(WeakOrder(((0,), (1,), (2,)))) == pytest.approx(math.log2(3))

    def test_layers_212(self):
        W = WeakOrder(((0, 1), (2,), (3, 4)))
        want = 2 * 0.4 * math.log2(2.5) + 0.2 * math.log2(5)
        assert weak_order_entropy(W) == pytest.approx(want)
        assert weak_order_entropy(W) == pytest.approx(1.5219, abs=1e-4)
        assert entropy_exact(W.to_poset()).value == pytest.approx(want, abs=1e-4)

    def test_rejects_overlap(self):
        with pytest.raises(ValueError):
            coloring_entropy([[0, 1], [1]], 2)


class TestEntropyExact:
    def test_single_relation_example(self, bcposet):
        r = entropy_exact(bcposet)
        assert r.converged
        assert r.value == pytest.approx(2 / 3, abs=1e-3)
        assert np.max(np.abs(r.x - [1, 0.5, 0.5])) <= 1e-2

    @pytest.mark.parametrize("n", [1, 2, 5, 8])
    def test_chain_and_antichain(self, n):
        assert entropy_exact(chain(n)).value == pytest.approx(math.log2(n), abs=1e-4)
        assert entropy_exact(antichain(n)).value == pytest.approx(0, abs=1e-9)

    def test_v_poset(self, vposet):
        assert entropy_exact(vposet).value == pytest.approx(math.log2(3) - 2 / 3, abs=1e-4)

    @pytest.mark.parametrize("n, pairs, h, hbar", CONIC_REFERENCE)
    def test_matches_conic_reference(self, n, pairs, h, hbar):
        P = from_relations(n, pairs)
        assert entropy_exact(P).value == pytest.approx(h, abs=2e-4)
        assert entropy_exact(P, "complement").value == pytest.approx(hbar, abs=2e-4)

    @given(posets(min_n=2, max_n=9))
    def test_complementary_entropies(self, P):
        total = entropy_exact(P).value + entropy_exact(P, "complement").value
        assert total == pytest.approx(math.log2(P.n), abs=2e-3)

    @given(posets(max_n=8))
    def test_bounded_by_greedy_point(self, P):
        r = entropy_exact(P)
        g = greedy_point(greedy_antichain_decomposition(P), P.n).entropy
        assert r.value <= g + 1e-9
        assert r.lower_bound <= r.value

    @given(posets(max_n=6), posets(max_n=6))
    def test_disjoint_union_is_weighted_average(self, P, Q):
        n = P.n + Q.n
        pairs = [(v, w) for v, w in P.covers] + [(P.n + v, P.n + w) for v, w in Q.covers]
        union = from_relations(n, pairs)
        want = (P.n * entropy_exact(P).value + Q.n * entropy_exact(Q).value) / n
        assert entropy_exact(union).value == pytest.approx(want, abs=2e-4)

    def test_objective_never_increases(self):
        P = random_poset(12, 0.25, 5)
        for mode in ("comparability", "complement"):
            hist = entropy_exact(P, mode, tol=1e-7).history
            assert all(b <= a + 1e-12 for a, b in zip(hist, hist[1:]))

    def test_iteration_budget(self):
        r = entropy_exact(random_poset(10, 0.3, 1), iters=1, tol=1e-12)
        assert not r.converged and r.iterations == 1 and r.gap > 0

    def test_x_feasible(self):
        P = random_poset(10, 0.3, 2)
        r = entropy_exact(P)
        assert chain_inequalities_hold(P, r.x.tolist(), tol=1e-9)
        assert r.value == pytest.approx(point_entropy(r.x.tolist()))

    def test_limits_and_modes(self):
        with pytest.raises(OracleLimitError):
            entropy_exact(antichain(6), limit=5)
        with pytest.raises(ValueError):
            entropy_exact(chain(2), mode="nope")
        assert entropy_exact(from_relations(0, [])).value == 0

    def test_complement_mode_beyond_enumeration(self):
        # the chain oracle is polynomial, so large posets are fine
        P = random_poset(40, 0.1, 7)
        r = entropy_exact(P, "complement")
        assert r.converged and 0 <= r.value <= math.log2(40)

    @given(posets(max_n=8))
    def test_chain_decomposition(self, P):
        chains = greedy_chain_decomposition(P)
        assert sorted(v for c in chains for v in c) == list(range(P.n))
        assert all(P.is_chain(c) for c in chains)


def test_entropy_of_sizes_ignores_zeros():
    assert entropy_of_sizes([2, 0, 2]) == pytest.approx(1)

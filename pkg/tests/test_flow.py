import random

import numpy as np
import pytest
from conftest import brute_max_antichain, posets
from hypothesis import given
from hypothesis import strategies as st

from poprod import kernels
from poprod.flow import (
    AntichainDecomposition,
    build_network,
    decrementing_reachable,
    extract_antichain,
    greedy_antichain_decomposition,
    initial_flow,
)
from poprod.poset import antichain, chain


def residual_maxima(P, dec):
    """Brute-force width of each residual poset, in extraction order."""
    alive = set(range(P.n))
    out = []
    for s in dec.sets:
        sub, _ = P.restrict(sorted(alive))
        out.append(brute_max_antichain(sub))
        alive -= set(s)
    return out


class TestNetwork:
    def test_chain2_shape(self):
        net = build_network(chain(2))
        assert net.num_nodes == 6 and net.num_arcs == 5
        s, t = net.source, net.sink
        assert set(net.arcs()) == {(s, 0), (0, 1), (1, 2), (2, 3), (3, t)}

    def test_antichain2_shape(self):
        net = build_network(antichain(2))
        assert net.num_nodes == 6 and net.num_arcs == 6

    def test_v_shape_and_arc_order(self, vposet):
        net = build_network(vposet)
        assert net.num_nodes == 8 and net.num_arcs == 8
        s, t = net.source, net.sink
        # source arcs, element arcs, cover arcs, sink arcs
        assert net.arcs() == [(s, 0), (0, 1), (2, 3), (4, 5), (1, 2), (1, 4), (3, t), (5, t)]
        assert net.lower.tolist() == [0, 1, 1, 1, 0, 0, 0, 0]
        assert [net.node_name(u) for u in (0, 3, s, t)] == ["0-", "1+", "s", "t"]

    def test_initial_flow_examples(self, vposet):
        net = initial_flow(build_network(antichain(2)))
        assert net.flow.tolist() == [1] * 6 and net.value() == 2
        net = initial_flow(build_network(chain(2)))
        assert net.flow.tolist() == [2] * 5 and net.value() == 2
        net = initial_flow(build_network(vposet))
        assert net.flow.tolist() == [3, 3, 2, 1, 2, 1, 2, 1]
        assert net.value() == 3 and net.is_feasible()

    @given(posets(max_n=10), st.integers(0, 2 ** 16))
    def test_initial_flow_feasible_with_value_n(self, P, seed):
        for rng in (None, random.Random(seed)):
            net = initial_flow(build_network(P), rng)
            assert net.is_feasible()
            assert net.value() == P.n

    def test_infeasible_detected(self, vposet):
        net = initial_flow(build_network(vposet))
        net.flow[2] = 0
        assert not net.is_feasible()

    def test_dot_export(self, vposet):
        dot = initial_flow(build_network(vposet)).to_dot()
        assert dot.startswith("digraph") and '"s" -> "0-" [label="3/0"]' in dot


class TestDecrementing:
    def test_antichain2_reachability(self):
        net = initial_flow(build_network(antichain(2)))
        Y = decrementing_reachable(net)
        # source arcs carry flow above their zero lower bound
        assert Y == {net.source, 0, 2}
        assert extract_antichain(net, Y) == {0, 1}

    def test_chain1_tight(self):
        net = initial_flow(build_network(chain(1)))
        Y = decrementing_reachable(net)
        assert net.sink not in Y
        assert extract_antichain(net, Y) == {0}

    def test_v_after_one_decrement(self, vposet):
        net = initial_flow(build_network(vposet))
        assert net.sink in decrementing_reachable(net)
        # push one unit back along s, a-, a+, b-, b+, t
        for a in (0, 1, 4, 2, 6):
            net.flow[a] -= 1
        assert net.is_feasible() and net.value() == 2
        Y = decrementing_reachable(net)
        assert net.sink not in Y
        assert extract_antichain(net, Y) == {1, 2}


class TestGreedyDecomposition:
    def test_examples(self, vposet, nposet):
        assert greedy_antichain_decomposition(antichain(5)).sets == ((0, 1, 2, 3, 4),)
        assert greedy_antichain_decomposition(chain(3)).sizes == [1, 1, 1]
        assert greedy_antichain_decomposition(vposet).sets == ((1, 2), (0,))
        assert greedy_antichain_decomposition(nposet).sets == ((0, 1), (2, 3))

    def test_empty(self):
        from poprod.poset import from_relations

        assert greedy_antichain_decomposition(from_relations(0, [])).sets == ()

    @given(posets(max_n=10))
    def test_each_set_is_maximum_of_residual(self, P):
        dec = greedy_antichain_decomposition(P)
        assert sorted(v for s in dec.sets for v in s) == list(range(P.n))
        assert all(P.is_antichain(s) for s in dec.sets)
        assert dec.sizes == residual_maxima(P, dec)

    @given(posets(max_n=9), st.integers(0, 2 ** 16))
    def test_random_initial_flow_keeps_sizes(self, P, seed):
        # any feasible start gives maximum antichains, so the size profile is fixed
        a = greedy_antichain_decomposition(P)
        b = greedy_antichain_decomposition(P, rng=random.Random(seed))
        assert a.sizes == b.sizes
        assert b.sizes == residual_maxima(P, b)

    @pytest.mark.skipif(kernels.compiled_backend is None, reason="compiled kernels not built")
    @given(posets(max_n=14))
    def test_backends_agree(self, P):
        a = greedy_antichain_decomposition(P, backend=kernels.python_backend)
        b = greedy_antichain_decomposition(P, backend=kernels.compiled_backend)
        assert a == b

    def test_labels_round_trip(self):
        dec = AntichainDecomposition(((1, 2), (0,)))
        assert dec.labels() == [1, 0, 0]
        assert AntichainDecomposition.from_labels(dec.labels()).sets == ((1, 2), (0,))
        assert dec.k == 2 and dec.n == 3

    def test_medium_poset_runs(self):
        from poprod.harness import random_poset

        P = random_poset(200, 0.05, 3)
        dec = greedy_antichain_decomposition(P)
        assert dec.n == 200 and all(P.is_antichain(s) for s in dec.sets)
        # residual widths can only shrink
        assert dec.sizes == sorted(dec.sizes, reverse=True)
        net = initial_flow(build_network(P))
        assert net.is_feasible() and np.all(net.flow >= net.lower)

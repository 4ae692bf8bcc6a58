import itertools

import networkx as nx
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from poprod.poset import from_relations

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# a <= b, a <= c
V_PAIRS = [(0, 1), (0, 2)]
# a <= c, a <= d, b <= d
N_PAIRS = [(0, 2), (0, 3), (1, 3)]
# b <= c with a isolated
BC_PAIRS = [(1, 2)]


@pytest.fixture
def vposet():
    return from_relations(3, V_PAIRS)


@pytest.fixture
def nposet():
    return from_relations(4, N_PAIRS)


@pytest.fixture
def bcposet():
    return from_relations(3, BC_PAIRS)


@st.composite
def dags(draw, min_n=1, max_n=8):
    """Random DAG on a shuffled topological order, returned as (n, pairs)."""
    n = draw(st.integers(min_n, max_n))
    order = draw(st.permutations(range(n)))
    cand = [(order[i], order[j]) for i, j in itertools.combinations(range(n), 2)]
    mask = draw(st.lists(st.booleans(), min_size=len(cand), max_size=len(cand)))
    return n, [p for p, keep in zip(cand, mask) if keep]


@st.composite
def posets(draw, min_n=1, max_n=8):
    n, pairs = draw(dags(min_n, max_n))
    return from_relations(n, pairs)


def nx_closure(n, pairs):
    g = nx.DiGraph()
    g.add_nodes_from(range(n))
    g.add_edges_from(pairs)
    return nx.transitive_closure_dag(g)


def brute_linear_extensions(P):
    return sum(
        all(pos[v] <= pos[w] for v in range(P.n) for w in range(P.n) if P.le(v, w))
        for pos in ({v: i for i, v in enumerate(perm)} for perm in itertools.permutations(range(P.n)))
    )


def brute_max_antichain(P, weights=None):
    w = weights or [1] * P.n
    best = 0
    for r in range(1, P.n + 1):
        for s in itertools.combinations(range(P.n), r):
            if all(not P.comparable(a, b) for a, b in itertools.combinations(s, 2)):
                best = max(best, sum(w[v] for v in s))
    return best


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)

"""Partial order production through greedy weak-order extensions."""

from .entropy import (
    EntropyResult,
    MembershipError,
    Potential,
    StabPoint,
    coloring_entropy,
    entropy_exact,
    greedy_point,
    potential_from_point,
    weak_order_entropy,
)
from .extension import GreedyExtension, greedy_weak_extension, interval_order_from_potential
from .flow import AntichainDecomposition, Network, build_network, greedy_antichain_decomposition, initial_flow
from .harness import bench, gen_family, gen_gk
from .kernels import BACKEND
from .multiselect import ComparisonOracle, Production, multiselect, produce, verify_production
from .poset import (
    CycleError,
    IntervalOrder,
    OracleLimitError,
    Poset,
    PosetError,
    WeakOrder,
    count_linear_extensions,
    itlb,
    max_antichain_brute,
)

__version__ = "0.1.0"

__all__ = [
    "AntichainDecomposition", "BACKEND", "ComparisonOracle", "CycleError", "EntropyResult",
    "GreedyExtension", "IntervalOrder", "MembershipError", "Network", "OracleLimitError", "Poset",
    "PosetError", "Potential", "Production", "StabPoint", "WeakOrder", "bench", "build_network",
    "coloring_entropy", "count_linear_extensions", "entropy_exact", "gen_family", "gen_gk",
    "greedy_antichain_decomposition", "greedy_point", "greedy_weak_extension", "initial_flow",
    "interval_order_from_potential", "itlb", "max_antichain_brute", "multiselect",
    "potential_from_point", "produce", "verify_production", "weak_order_entropy",
]

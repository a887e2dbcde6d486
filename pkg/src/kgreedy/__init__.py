"""Greedy link scheduling under the K-hop interference model.

Centralized greedy, a synchronous simulator of the distributed greedy
protocol, and an exact branch-and-bound baseline.
"""

from .centralized import Schedule, centralized_greedy, higher_interfering_remaining
from .engine import (
    LemmaReport,
    RoundCapExceeded,
    RunConfig,
    RunResult,
    Trace,
    check_lemma_invariants,
    dnt_fixpoint,
    flood,
    run,
)
from .oracle import (
    Family,
    GenSpec,
    OptimalResult,
    approximation_report,
    brute_force_optimal,
    generate,
    naive_optimal,
    random_suite,
)
from .protocol import CheckRule, LinkState, Message, MessageKind, NodeState
from .topology import (
    UNREACHABLE,
    Link,
    Price,
    Topology,
    TopologyError,
    interference_set,
    interferes,
    is_k_valid_matching,
    is_maximal,
    link_distance,
    neighborhood,
    node_distance,
)

__version__ = "0.1.0"

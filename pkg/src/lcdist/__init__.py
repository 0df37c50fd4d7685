"""Distribute labeled graph states over noisy fiber networks.

The library searches the local-complementation orbit of a target state
for an equivalent state that is cheaper to build from pairwise EPR links,
plans the routed distribution and fusion of that state, and compresses
the single-qubit Cliffords that recover the original target.
"""

from . import annealer, clifford, graphstate, network, orbit, planner, verify
from .annealer import SAConfig, SAResult, anneal, anneal_multi, objective
from .clifford import (
    CliffordWord,
    SingleQubitClifford,
    StabilizerTableau,
    compose,
    compress,
    graph_state_tableau,
    inverse,
    recovery_word,
    replay_witness,
    verify_recovery,
)
from .errors import LcdistError
from .graphstate import (
    GraphState,
    complete_state,
    format_graph,
    from_edges,
    fuse,
    local_complement,
    measure_x,
    measure_y,
    measure_z,
    parse_graph,
    path_state,
    star_state,
    toggle_cz,
)
from .network import (
    DEFAULT_NOISE,
    NoiseParams,
    PhysicalNetwork,
    best_path,
    generate,
    link_success,
    pair_probabilities,
)
from .orbit import Orbit, OrbitCensus, enumerate_orbit, full_census, min_edge_cost, orbit_optimum
from .planner import (
    DistributionPlan,
    direct_plan,
    edcg_cost,
    epr_comparison,
    format_plan,
    parse_plan,
    plan,
)

__version__ = "0.1.0"

__all__ = [
    "annealer",
    "clifford",
    "graphstate",
    "network",
    "orbit",
    "planner",
    "verify",
    "SAConfig",
    "SAResult",
    "anneal",
    "anneal_multi",
    "objective",
    "CliffordWord",
    "SingleQubitClifford",
    "StabilizerTableau",
    "compose",
    "compress",
    "graph_state_tableau",
    "inverse",
    "recovery_word",
    "replay_witness",
    "verify_recovery",
    "LcdistError",
    "GraphState",
    "complete_state",
    "format_graph",
    "from_edges",
    "fuse",
    "local_complement",
    "measure_x",
    "measure_y",
    "measure_z",
    "parse_graph",
    "path_state",
    "star_state",
    "toggle_cz",
    "DEFAULT_NOISE",
    "NoiseParams",
    "PhysicalNetwork",
    "best_path",
    "generate",
    "link_success",
    "pair_probabilities",
    "Orbit",
    "OrbitCensus",
    "enumerate_orbit",
    "full_census",
    "min_edge_cost",
    "orbit_optimum",
    "DistributionPlan",
    "direct_plan",
    "edcg_cost",
    "epr_comparison",
    "format_plan",
    "parse_plan",
    "plan",
]

"""Distribution planning: routes, fusion schedule, recovery, the overall
end-to-end success probability, and the EPR-cost baseline comparison.

A plan fixes everything needed to execute one distribution attempt: the
LC-equivalent state to build, a best route per equivalent-state edge, the
per-node fusion schedule merging EPR ends into graph-state qubits, and the
compressed per-qubit recovery gates. Probabilities multiply as
p_entanglement * (p_cz p_Y-msr)^m1 * p_1g^m2 under the first-order
roll-back-on-any-error accounting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import annealer, clifford, graphstate, network as network_mod, orbit
from .clifford import SingleQubitClifford
from .errors import (
    InvalidNError,
    LengthMismatchError,
    RecoveryVerificationFailedError,
    TooLargeError,
    WitnessInconsistentError,
)
from .graphstate import GraphState
from .network import NoiseParams, PhysicalNetwork


@dataclass(frozen=True)
class DistributionPlan:
    g_star: GraphState
    routes: tuple[tuple[tuple[int, int], tuple[int, ...]], ...]
    fusion_ops: tuple[tuple[int, tuple[tuple[int, int], ...]], ...]
    m1: int
    m2: int
    recovery: tuple[SingleQubitClifford, ...]
    p_entanglement: float
    p_fusion: float
    p_lc: float
    p_overall: float
    epr_cost: int
    route_hops: int
    strict_signs: bool


def _xlog(base: float, count: int) -> float:
    if count == 0:
        return 0.0
    if base <= 0.0:
        return -math.inf
    return count * math.log(base)


def fusion_count(g_star: GraphState) -> int:
    """m1 = 2|E*| - |V*|, equivalently sum of (deg - 1) when connected."""
    return 2 * g_star.edge_count() - g_star.qubit_count


def recovery_gates(
    target: GraphState, witness
) -> tuple[tuple[SingleQubitClifford, ...], int]:
    word = clifford.recovery_word(target, list(witness))
    compressed = tuple(clifford.compress(word))
    return compressed, clifford.native_gate_count(compressed)


def overall_log_probability(
    target: GraphState,
    sa: "annealer.SAResult",
    probs: np.ndarray,
    noise: NoiseParams,
) -> float:
    """log of the end-to-end success probability of realizing ``target``
    through sa.g_star; computable from the pair matrix alone."""
    logp = annealer._log_probs(target.qubit_count, probs)
    ent = annealer._mask_log_objective(
        sa.g_star.edges, target.qubit_count, logp
    )
    m1 = fusion_count(sa.g_star)
    _, m2 = recovery_gates(target, sa.witness)
    return (
        ent
        + _xlog(noise.p_cz * noise.p_y_msr, m1)
        + _xlog(noise.p_1g, m2)
    )


def _fusion_schedule(g_star: GraphState, mapping: dict[int, int]):
    """Per-vertex merge ops over pre-fusion qubit ids (2k, 2k+1 are the
    two ends of canonical edge k; the lower-vertex end is the control)."""
    edges = g_star.edge_list()
    end_of = {}
    for k, (i, j) in enumerate(edges):
        end_of[(i, j)] = 2 * k
        end_of[(j, i)] = 2 * k + 1
    ops = []
    for v in range(g_star.qubit_count):
        ends = [end_of[(v, b)] for b in g_star.neighbors(v)]
        if len(ends) > 1:
            ops.append(
                (mapping[v], tuple((ends[0], e) for e in ends[1:]))
            )
    return tuple(ops)


def build_prefusion_state(
    g_star: GraphState, mapping: dict[int, int]
) -> GraphState:
    """One CZ-rendered EPR pair per equivalent-state edge: qubits 2k and
    2k+1 joined by an edge, labeled with the nodes holding each end."""
    edges = g_star.edge_list()
    mask = 0
    labels = []
    for k, (i, j) in enumerate(edges):
        mask |= 1 << graphstate.pair_bit(2 * k, 2 * k + 1)
        labels.append((2 * k, mapping[i]))
        labels.append((2 * k + 1, mapping[j]))
    return GraphState(2 * len(edges), mask, tuple(sorted(labels)))


def replay_fusions(
    pre: GraphState,
    fusion_ops: tuple[tuple[int, tuple[tuple[int, int], ...]], ...],
) -> GraphState:
    """Apply the schedule, tracking index shifts as qubits are consumed."""
    state = pre
    where = {v: v for v in range(pre.qubit_count)}
    for _, ops in fusion_ops:
        for control, consumed in ops:
            victim = where[consumed]
            state = graphstate.fuse(state, where[control], victim)
            shift = graphstate.removal_index_map(state.qubit_count + 1, victim)
            where = {
                orig: shift[cur]
                for orig, cur in where.items()
                if cur != victim
            }
    return state


def fusion_replay_matches(
    g_star: GraphState,
    mapping: dict[int, int],
    fusion_ops,
) -> bool:
    """Replaying the schedule on the pre-fusion state must reproduce
    g_star with each surviving qubit on its mapped node."""
    final = replay_fusions(build_prefusion_state(g_star, mapping), fusion_ops)
    if final.qubit_count != g_star.qubit_count:
        return False
    node_to_vertex = {node: v for v, node in mapping.items()}
    vertex_of = {}
    for k in range(final.qubit_count):
        label = final.label_of(k)
        if label not in node_to_vertex:
            return False
        vertex_of[k] = node_to_vertex[label]
    if sorted(vertex_of.values()) != list(range(g_star.qubit_count)):
        return False
    mask = 0
    for k, l in final.edge_list():
        mask |= 1 << graphstate.pair_bit(vertex_of[k], vertex_of[l])
    return mask == g_star.edges


def plan(
    target: GraphState,
    sa: "annealer.SAResult",
    network: PhysicalNetwork,
    mapping: dict[int, int],
    bsm_per_hop: bool = False,
) -> DistributionPlan:
    """Full distribution plan for realizing ``target`` via sa.g_star."""
    q = target.qubit_count
    network_mod.validate_mapping(mapping, q, network.node_count)
    g_star = sa.g_star
    if g_star.qubit_count != q:
        raise LengthMismatchError("equivalent state has a different qubit count")
    replayed = clifford.replay_witness(target, list(sa.witness))[-1]
    if replayed.edges != g_star.edges:
        raise WitnessInconsistentError(
            "witness does not map the target to the planned state"
        )

    routes = []
    ent_log = 0.0
    hops = 0
    for i, j in g_star.edge_list():
        path, p = network_mod.best_path(
            network, mapping[i], mapping[j], bsm_per_hop
        )
        routes.append(((i, j), path))
        ent_log += math.log(p)
        hops += len(path) - 1

    fusion_ops = _fusion_schedule(g_star, mapping)
    m1 = fusion_count(g_star)
    assert m1 == sum(len(ops) for _, ops in fusion_ops)

    recovery, m2 = recovery_gates(target, sa.witness)
    ok, strict = clifford.verify_recovery_detail(g_star, list(recovery), target)
    if not ok:
        raise RecoveryVerificationFailedError(
            "compressed recovery does not map the planned state to the target"
        )

    noise = network.noise
    p_entanglement = math.exp(ent_log)
    p_fusion = math.exp(_xlog(noise.p_cz * noise.p_y_msr, m1))
    p_lc = math.exp(_xlog(noise.p_1g, m2))
    return DistributionPlan(
        g_star=g_star,
        routes=tuple(routes),
        fusion_ops=fusion_ops,
        m1=m1,
        m2=m2,
        recovery=recovery,
        p_entanglement=p_entanglement,
        p_fusion=p_fusion,
        p_lc=p_lc,
        p_overall=math.exp(ent_log + _xlog(noise.p_cz * noise.p_y_msr, m1) + _xlog(noise.p_1g, m2)),
        epr_cost=g_star.edge_count(),
        route_hops=hops,
        strict_signs=strict,
    )


def direct_plan(
    target: GraphState,
    network: PhysicalNetwork,
    mapping: dict[int, int],
    bsm_per_hop: bool = False,
) -> DistributionPlan:
    """Baseline: distribute the target itself, no LC search, no recovery."""
    no_move = annealer.SAResult(
        g_star=target,
        witness=(),
        objective=math.nan,
        trace=(),
        best_is_initial=True,
    )
    return plan(target, no_move, network, mapping, bsm_per_hop)


# -- EPR cost comparison ---------------------------------------------------


def edcg_cost(node_count: int) -> int:
    """Edge-decorated-complete-graph baseline: N(N-1)/2 EPR pairs."""
    if node_count < 2:
        raise InvalidNError(f"need at least 2 nodes, got {node_count}")
    return node_count * (node_count - 1) // 2


def epr_comparison(
    max_qubits: int, censuses: dict[int, "orbit.OrbitCensus"] | None = None
):
    """Rows (q, ours, edcg, reduction) for q = 3..max_qubits, where ours
    is the worst-case orbit-minimal edge count from the census."""
    if not orbit.CENSUS_MIN_QUBITS <= max_qubits <= orbit.CENSUS_MAX_QUBITS:
        raise TooLargeError(
            f"comparison supports {orbit.CENSUS_MIN_QUBITS} <= q <= "
            f"{orbit.CENSUS_MAX_QUBITS}"
        )
    rows = []
    for q in range(orbit.CENSUS_MIN_QUBITS, max_qubits + 1):
        census = censuses[q] if censuses else orbit.full_census(q)
        ours = orbit.min_edge_cost(census)
        edcg = edcg_cost(q)
        rows.append((q, ours, edcg, 1.0 - ours / edcg))
    return rows


# -- plan text format -------------------------------------------------------
#
# Sections in fixed order, each closed by `end`:
#   gstar          the equivalent state in the graph text format
#   routes         `route <i> <j> : <node...>` per canonical edge
#   fusions        `fuse <node> <control> <consumed>` in execution order
#   recovery       `gate <qubit> <element>` for every qubit
#   probabilities  fixed keys, floats via repr round-trip


def format_plan(plan_: DistributionPlan) -> str:
    out = ["# distribution plan v1", "gstar"]
    out.append(graphstate.format_graph(plan_.g_star).rstrip("\n"))
    out.append("end")
    out.append("routes")
    for (i, j), path in plan_.routes:
        out.append(f"route {i} {j} : {' '.join(str(n) for n in path)}")
    out.append("end")
    out.append("fusions")
    for node, ops in plan_.fusion_ops:
        for control, consumed in ops:
            out.append(f"fuse {node} {control} {consumed}")
    out.append("end")
    out.append("recovery")
    for qubit, gate in enumerate(plan_.recovery):
        out.append(f"gate {qubit} {gate.name}")
    out.append("end")
    out.append("probabilities")
    out.append(f"p_entanglement {plan_.p_entanglement!r}")
    out.append(f"p_fusion {plan_.p_fusion!r}")
    out.append(f"p_lc {plan_.p_lc!r}")
    out.append(f"p_overall {plan_.p_overall!r}")
    out.append(f"m1 {plan_.m1}")
    out.append(f"m2 {plan_.m2}")
    out.append(f"epr_cost {plan_.epr_cost}")
    out.append(f"route_hops {plan_.route_hops}")
    out.append(f"strict_signs {int(plan_.strict_signs)}")
    out.append("end")
    return "\n".join(out) + "\n"


def parse_plan(text: str) -> DistributionPlan:
    sections: dict[str, list[str]] = {}
    current = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if current is None:
            sections[line] = []
            current = line
        elif line == "end":
            current = None
        else:
            sections[current].append(line)
    g_star = graphstate.parse_graph("\n".join(sections["gstar"]))
    routes = []
    for line in sections["routes"]:
        head, _, tail = line.partition(":")
        _, i, j = head.split()
        routes.append(
            ((int(i), int(j)), tuple(int(n) for n in tail.split()))
        )
    fusions_by_node: dict[int, list[tuple[int, int]]] = {}
    node_order = []
    for line in sections["fusions"]:
        _, node, control, consumed = line.split()
        node = int(node)
        if node not in fusions_by_node:
            fusions_by_node[node] = []
            node_order.append(node)
        fusions_by_node[node].append((int(control), int(consumed)))
    fusion_ops = tuple(
        (node, tuple(fusions_by_node[node])) for node in node_order
    )
    gates = {}
    for line in sections["recovery"]:
        _, qubit, name = line.split()
        gates[int(qubit)] = clifford.clifford_from_name(name)
    recovery = tuple(gates[k] for k in sorted(gates))
    values: dict[str, str] = {}
    for line in sections["probabilities"]:
        key, _, value = line.partition(" ")
        values[key] = value
    return DistributionPlan(
        g_star=g_star,
        routes=tuple(routes),
        fusion_ops=fusion_ops,
        m1=int(values["m1"]),
        m2=int(values["m2"]),
        recovery=recovery,
        p_entanglement=float(values["p_entanglement"]),
        p_fusion=float(values["p_fusion"]),
        p_lc=float(values["p_lc"]),
        p_overall=float(values["p_overall"]),
        epr_cost=int(values["epr_cost"]),
        route_hops=int(values["route_hops"]),
        strict_signs=bool(int(values["strict_signs"])),
    )

"""Self-checking property suites for the core invariants.

Each suite returns a SuiteResult rather than raising, so the CLI can
print one line per suite and exit nonzero if any failed. Suites accept a
seed (all randomness is explicit) and the group-axiom suite accepts an
injectable composition function so a deliberately corrupted table is
detectable in tests.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import annealer, clifford, graphstate, network, orbit, planner
from .graphstate import GraphState
from .rng import SplitMix64, child_seed


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str


def _connected_masks(q: int):
    for mask in range(1 << graphstate.mask_bit_count(q)):
        if orbit._mask_connected(mask, q):
            yield mask


def _random_connected_mask(q: int, rng: SplitMix64) -> int:
    while True:
        mask = rng.randrange(1 << graphstate.mask_bit_count(q))
        if orbit._mask_connected(mask, q):
            return mask


def suite_lc_involution(seed: int = 0) -> SuiteResult:
    """LC at the same vertex twice restores the graph; exhaustive q <= 6,
    sampled q = 7, 8."""
    checks = 0
    for q in range(2, 7):
        ptable = orbit._clique_mask_table(q)
        for mask in _connected_masks(q):
            for a in range(q):
                once = orbit.lc_mask(mask, q, a, ptable)
                if orbit.lc_mask(once, q, a, ptable) != mask:
                    return SuiteResult(
                        "lc_involution", False, f"q={q} mask={mask} pivot={a}"
                    )
                checks += 1
    rng = SplitMix64(child_seed(seed, 1))
    for q in (7, 8):
        ptable = orbit._clique_mask_table(q)
        for _ in range(200):
            mask = _random_connected_mask(q, rng)
            a = rng.randrange(q)
            once = orbit.lc_mask(mask, q, a, ptable)
            if orbit.lc_mask(once, q, a, ptable) != mask:
                return SuiteResult(
                    "lc_involution", False, f"q={q} mask={mask} pivot={a}"
                )
            checks += 1
    return SuiteResult("lc_involution", True, f"{checks} checks")


def suite_lc_connectivity(seed: int = 0) -> SuiteResult:
    """LC never disconnects a connected graph (same scope as involution)."""
    checks = 0
    for q in range(2, 7):
        ptable = orbit._clique_mask_table(q)
        for mask in _connected_masks(q):
            for a in range(q):
                if not orbit._mask_connected(
                    orbit.lc_mask(mask, q, a, ptable), q
                ):
                    return SuiteResult(
                        "lc_connectivity", False, f"q={q} mask={mask} pivot={a}"
                    )
                checks += 1
    rng = SplitMix64(child_seed(seed, 2))
    for q in (7, 8):
        ptable = orbit._clique_mask_table(q)
        for _ in range(200):
            mask = _random_connected_mask(q, rng)
            a = rng.randrange(q)
            if not orbit._mask_connected(orbit.lc_mask(mask, q, a, ptable), q):
                return SuiteResult(
                    "lc_connectivity", False, f"q={q} mask={mask} pivot={a}"
                )
            checks += 1
    return SuiteResult("lc_connectivity", True, f"{checks} checks")


def suite_lc_tableau(max_qubits: int = 6) -> SuiteResult:
    """The per-qubit LC operators carry the stabilizer group of G onto
    that of LC_a(G), for every connected state and pivot up to q = 6.
    Sign-strict agreement is counted but not required."""
    sqx = clifford.clifford_of_generator("sqrt_minus_iX")
    sqz = clifford.clifford_of_generator("sqrt_iZ")
    checks = 0
    strict_misses = 0
    for q in range(2, max_qubits + 1):
        for mask in _connected_masks(q):
            state = GraphState(q, mask)
            tab = clifford.graph_state_tableau(state)
            for a in range(q):
                nbrs = state.neighbor_mask(a)
                per_qubit = [
                    sqx if v == a else (sqz if nbrs >> v & 1 else clifford.IDENTITY)
                    for v in range(q)
                ]
                moved = clifford.apply_local_cliffords(tab, per_qubit)
                target = clifford.graph_state_tableau(
                    graphstate.local_complement(state, a)
                )
                mod_sign, strict = clifford.tableau_groups_equal(moved, target)
                if not mod_sign:
                    return SuiteResult(
                        "lc_tableau", False, f"q={q} mask={mask} pivot={a}"
                    )
                strict_misses += not strict
                checks += 1
    return SuiteResult(
        "lc_tableau",
        True,
        f"{checks} checks, {strict_misses} sign-only deviations",
    )


def suite_clifford_axioms(compose_fn=None) -> SuiteResult:
    """Group axioms over all 24^3 triples; ``compose_fn`` is injectable so
    a corrupted composition table is caught (negative-control hook)."""
    comp = compose_fn or clifford.compose
    elems = clifford.all_elements()
    ident = clifford.IDENTITY
    for c in elems:
        if comp(ident, c) != c or comp(c, ident) != c:
            return SuiteResult("clifford_axioms", False, f"identity law at {c}")
        if not comp(c, clifford.inverse(c)).is_identity():
            return SuiteResult("clifford_axioms", False, f"inverse law at {c}")
        if not comp(clifford.inverse(c), c).is_identity():
            return SuiteResult("clifford_axioms", False, f"inverse law at {c}")
    for a, b, c in itertools.product(elems, repeat=3):
        if comp(comp(a, b), c) != comp(a, comp(b, c)):
            return SuiteResult(
                "clifford_axioms",
                False,
                f"associativity at ({a.name}, {b.name}, {c.name})",
            )
    return SuiteResult(
        "clifford_axioms", True, f"{len(elems) ** 3} triples"
    )


def suite_witness_replay(seed: int = 0) -> SuiteResult:
    """Annealer witnesses and orbit witnesses both replay to their states."""
    rng = SplitMix64(child_seed(seed, 3))
    checks = 0
    for _ in range(40):
        q = 3 + rng.randrange(6)
        target = GraphState(q, _random_connected_mask(q, rng))
        probs = _random_probs(q, rng)
        result = annealer.anneal(
            target, probs, annealer.SAConfig(seed=rng.next_u64())
        )
        replay = clifford.replay_witness(target, list(result.witness))[-1]
        if replay.edges != result.g_star.edges:
            return SuiteResult(
                "witness_replay", False, f"SA witness broken on q={q}"
            )
        checks += 1
    for _ in range(40):
        q = 3 + rng.randrange(4)
        state = GraphState(q, _random_connected_mask(q, rng))
        best, pivots = orbit.orbit_optimum(
            state, lambda s: s.edge_count(), "min"
        )
        replay = clifford.replay_witness(state, pivots)[-1]
        if replay.edges != best.edges:
            return SuiteResult(
                "witness_replay", False, f"orbit witness broken on q={q}"
            )
        checks += 1
    return SuiteResult("witness_replay", True, f"{checks} witnesses")


def _random_probs(q: int, rng: SplitMix64) -> np.ndarray:
    probs = np.full((q, q), np.nan)
    for i in range(q):
        for j in range(i + 1, q):
            probs[i, j] = probs[j, i] = 0.05 + 0.9 * rng.random()
    return probs


def _all_simple_paths(adj, u, v):
    stack = [(u, (u,))]
    while stack:
        node, path = stack.pop()
        if node == v:
            yield path
            continue
        for nxt, _ in adj[node]:
            if nxt not in path:
                stack.append((nxt, path + (nxt,)))


def suite_dijkstra_oracle(seed: int = 0) -> SuiteResult:
    """Routing agrees with exhaustive simple-path search on 12-node
    networks, in both BSM accounting modes."""
    checks = 0
    for k, model in enumerate(("er", "ba", "ws")):
        net = network.generate(model, 12, None, child_seed(seed, 10 + k))
        adj = net.adjacency()
        for per_hop in (False, True):
            for u in range(12):
                for v in range(u + 1, 12):
                    best_cost = None
                    for path in _all_simple_paths(adj, u, v):
                        total = sum(
                            network._link_length(adj, path[i], path[i + 1])
                            for i in range(len(path) - 1)
                        )
                        p = network._route_probability(
                            net.noise, total, len(path) - 1, per_hop
                        )
                        key = (-p, path)
                        if best_cost is None or key < best_cost:
                            best_cost = key
                    got_path, got_p = network.best_path(net, u, v, per_hop)
                    want_p, want_path = -best_cost[0], best_cost[1]
                    if got_p < want_p * (1 - 1e-12):
                        return SuiteResult(
                            "dijkstra_oracle",
                            False,
                            f"{model} {u}-{v} found {got_p} < {want_p}",
                        )
                    if abs(got_p - want_p) <= want_p * 1e-12 and got_path != want_path:
                        return SuiteResult(
                            "dijkstra_oracle",
                            False,
                            f"{model} {u}-{v} tie-break {got_path} != {want_path}",
                        )
                    checks += 1
    return SuiteResult("dijkstra_oracle", True, f"{checks} pairs")


def suite_m1_identity(max_qubits: int = 8, censuses=None) -> SuiteResult:
    """m1 = 2|E| - |V| equals the per-vertex (deg - 1) sum and the length
    of the fusion schedule on every census class representative."""
    checks = 0
    for q in range(orbit.CENSUS_MIN_QUBITS, max_qubits + 1):
        census = (
            censuses[q]
            if censuses and q in censuses
            else orbit.full_census(q)
        )
        for cls in census.classes:
            state = GraphState(q, cls.representative_mask)
            m1 = planner.fusion_count(state)
            by_degree = sum(state.degree(v) - 1 for v in range(q))
            mapping = {v: v for v in range(q)}
            schedule = planner._fusion_schedule(state, mapping)
            scheduled = sum(len(ops) for _, ops in schedule)
            if not (m1 == by_degree == scheduled and m1 >= 0):
                return SuiteResult(
                    "m1_identity",
                    False,
                    f"q={q} class={cls.class_id}: {m1}/{by_degree}/{scheduled}",
                )
            checks += 1
    return SuiteResult("m1_identity", True, f"{checks} representatives")


def suite_recovery_fuzz(seed: int = 0, cases: int = 100) -> SuiteResult:
    """Random witnesses (length <= 80) per q: compression stays one gate
    per qubit and the compressed recovery verifies against the target."""
    rng = SplitMix64(child_seed(seed, 4))
    checks = 0
    for q in range(3, 9):
        for _ in range(cases):
            target = GraphState(q, _random_connected_mask(q, rng))
            witness = [rng.randrange(q) for _ in range(rng.randrange(81))]
            g_star = clifford.replay_witness(target, witness)[-1]
            gates = clifford.compress(clifford.recovery_word(target, witness))
            if len(gates) != q:
                return SuiteResult(
                    "recovery_fuzz", False, f"q={q}: {len(gates)} gates"
                )
            if not clifford.verify_recovery(g_star, gates, target):
                return SuiteResult(
                    "recovery_fuzz",
                    False,
                    f"q={q} mask={target.edges} witness={witness}",
                )
            checks += 1
    return SuiteResult("recovery_fuzz", True, f"{checks} witnesses, all verified")


def run_all(
    seed: int = 0,
    cases: int = 100,
    compose_fn=None,
    censuses=None,
    max_census_qubits: int = 8,
) -> list[SuiteResult]:
    return [
        suite_lc_involution(seed),
        suite_lc_connectivity(seed),
        suite_lc_tableau(),
        suite_clifford_axioms(compose_fn),
        suite_witness_replay(seed),
        suite_dijkstra_oracle(seed),
        suite_m1_identity(max_census_qubits, censuses),
        suite_recovery_fuzz(seed, cases),
    ]

"""Simulated annealing over LC moves for the entanglement success product.

Each restart walks the LC orbit from the target: cool the temperature,
apply local complementation at a uniform random vertex, and accept by the
Metropolis rule on the difference of negated edge-probability products.
Accepted pivots are recorded in order, so any visited state is reachable
by a witness prefix; the best-objective visited state is reported rather
than the final-temperature one.

Multi-restart selection also scores the no-move candidate and picks the
winner by the end-to-end overall success probability (entanglement times
fusion times recovery), so the result never falls below direct
construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import graphstate, orbit
from .errors import DisconnectedError, InvalidParamsError, MissingPairError
from .graphstate import GraphState
from .network import NoiseParams
from .rng import SplitMix64, child_seed


@dataclass(frozen=True)
class SAConfig:
    t0: float = 1.0
    tn: float = 1e-3
    beta: float = 0.95
    restarts: int = 5
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.tn < self.t0:
            raise InvalidParamsError("need t0 > tn > 0")
        if not 0.0 < self.beta < 1.0:
            raise InvalidParamsError("cooling factor must lie in (0, 1)")
        if self.restarts < 1:
            raise InvalidParamsError("need at least one restart")


def iteration_count(config: SAConfig) -> int:
    """Number of loop passes before the temperature falls to tn."""
    return math.ceil(
        math.log(config.tn / config.t0) / math.log(config.beta)
    )


@dataclass(frozen=True)
class SAResult:
    g_star: GraphState
    witness: tuple[int, ...]
    objective: float
    trace: tuple[tuple[float, float, bool], ...]
    best_is_initial: bool


def _log_probs(qubit_count: int, probs: np.ndarray) -> np.ndarray:
    probs = np.asarray(probs, dtype=float)
    if probs.shape[0] < qubit_count or probs.shape[1] < qubit_count:
        raise MissingPairError(
            f"probability matrix {probs.shape} too small for q={qubit_count}"
        )
    with np.errstate(divide="ignore"):
        return np.log(probs)


def _mask_log_objective(mask: int, q: int, logp: np.ndarray) -> float:
    total = 0.0
    for bit in graphstate._bits_of(mask):
        i, j = graphstate.bit_to_pair(bit)
        value = logp[i, j]
        if math.isnan(value):
            raise MissingPairError(f"no probability for qubit pair ({i}, {j})")
        total += value
    return total


def objective(state: GraphState, probs: np.ndarray) -> float:
    """Product of pair probabilities over the state's edges (empty = 1)."""
    logp = _log_probs(state.qubit_count, probs)
    return math.exp(_mask_log_objective(state.edges, state.qubit_count, logp))


def anneal(
    target: GraphState, probs: np.ndarray, config: SAConfig
) -> SAResult:
    """One annealing run seeded with config.seed."""
    if not target.is_connected():
        raise DisconnectedError("annealing target must be connected")
    q = target.qubit_count
    logp = _log_probs(q, probs)
    ptable = orbit._clique_mask_table(q)
    rng = SplitMix64(config.seed)

    current = target.edges
    cur_log = _mask_log_objective(current, q, logp)
    witness: list[int] = []
    best_log, best_mask, best_prefix = cur_log, current, 0
    trace = []

    t = config.t0
    while t > config.tn:
        t_next = config.beta * t
        a = rng.randrange(q)
        proposal = orbit.lc_mask(current, q, a, ptable)
        new_log = _mask_log_objective(proposal, q, logp)
        # delta of the negated products, as linear probabilities
        delta = math.exp(cur_log) - math.exp(new_log)
        accepted = delta < 0 or rng.random() < math.exp(-delta / t)
        if accepted:
            current, cur_log = proposal, new_log
            witness.append(a)
            if cur_log > best_log or (
                cur_log == best_log and current < best_mask
            ):
                best_log, best_mask = cur_log, current
                best_prefix = len(witness)
        trace.append((t, math.exp(cur_log), accepted))
        t = t_next

    g_star = GraphState(q, best_mask, target.labels)
    return SAResult(
        g_star=g_star,
        witness=tuple(witness[:best_prefix]),
        objective=objective(g_star, probs),
        trace=tuple(trace),
        best_is_initial=best_mask == target.edges and best_prefix == 0,
    )


def anneal_multi(
    target: GraphState,
    probs: np.ndarray,
    config: SAConfig,
    noise: NoiseParams | None = None,
) -> SAResult:
    """Best of `restarts` independent runs plus the no-move candidate,
    selected by the end-to-end success probability of the full plan."""
    from . import planner  # deferred: planner imports this module

    if noise is None:
        noise = NoiseParams()
    candidates = [
        SAResult(
            g_star=target,
            witness=(),
            objective=objective(target, probs),
            trace=(),
            best_is_initial=True,
        )
    ]
    for r in range(config.restarts):
        sub = SAConfig(
            t0=config.t0,
            tn=config.tn,
            beta=config.beta,
            restarts=1,
            seed=child_seed(config.seed, r),
        )
        candidates.append(anneal(target, probs, sub))

    best = None
    best_score = -math.inf
    for cand in candidates:
        score = planner.overall_log_probability(
            target, cand, probs, noise
        )
        if score > best_score:
            best, best_score = cand, score
    return best

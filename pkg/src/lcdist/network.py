"""Fiber network model: topology generation, link success, routing.

A network is a connected undirected graph over physical nodes with link
lengths in kilometers. Elementary entanglement over a channel succeeds
with the attenuation/detection probability below; a multi-hop route is
treated as one effective channel of the summed length (stations perform
only a Bell measurement, already counted once), with an optional
per-intermediate-station BSM penalty for sensitivity runs.

All randomness flows through the documented 64-bit generator in ``rng``,
so identical (model, params, seed) reproduce identical networks anywhere.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    ConnectivityFailureError,
    DuplicateEdgeError,
    InvalidLengthError,
    InvalidParamsError,
    MappingInvalidError,
    UnreachableError,
)
from .rng import SplitMix64, child_seed

LINK_LENGTH_KM = (0.5, 1.2)
_CONNECT_RETRIES = 64


@dataclass(frozen=True)
class NoiseParams:
    """Channel and gate noise model with the evaluation defaults.

    ``detection`` selects where the Bell measurement happens: ``midpoint``
    attenuates both flying qubits (eta2 squared), ``endpoint`` places the
    detector at one node so a single photon travels.
    """

    eta1: float = 0.9
    alpha: float = 0.2  # dB/km
    epsilon_d: float = 0.1
    p_bsm: float = 0.5
    f_dc: float = 1000.0
    epsilon_1g: float = 0.01
    epsilon_2g: float = 0.05
    p_y_msr: float = 0.99
    detection: str = "endpoint"

    def __post_init__(self):
        probs = {
            "eta1": self.eta1,
            "epsilon_d": self.epsilon_d,
            "p_bsm": self.p_bsm,
            "epsilon_1g": self.epsilon_1g,
            "epsilon_2g": self.epsilon_2g,
            "p_y_msr": self.p_y_msr,
        }
        for name, value in probs.items():
            if not 0.0 <= value <= 1.0:
                raise InvalidParamsError(f"{name}={value} outside [0, 1]")
        if self.f_dc <= 1.0:
            raise InvalidParamsError("f_dc must exceed 1 Hz")
        if self.alpha <= 0.0:
            raise InvalidParamsError("alpha must be positive")
        if self.detection not in ("endpoint", "midpoint"):
            raise InvalidParamsError(
                f"detection must be endpoint|midpoint, got {self.detection!r}"
            )

    @property
    def l_att(self) -> float:
        """Attenuation length 10 / (alpha ln 10), in km."""
        return 10.0 / (self.alpha * math.log(10.0))

    @property
    def p_cz(self) -> float:
        return 1.0 - self.epsilon_2g

    @property
    def p_1g(self) -> float:
        return 1.0 - self.epsilon_1g


DEFAULT_NOISE = NoiseParams()


@dataclass(frozen=True)
class PhysicalNetwork:
    """Immutable undirected fiber network; links stored as (u, v, km)."""

    node_count: int
    links: tuple[tuple[int, int, float], ...]
    noise: NoiseParams = field(default=DEFAULT_NOISE)

    def __post_init__(self):
        seen = set()
        for u, v, length in self.links:
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise InvalidParamsError(f"link ({u}, {v}) out of range")
            if u == v:
                raise InvalidParamsError(f"self-link on node {u}")
            if length <= 0:
                raise InvalidLengthError(f"link ({u}, {v}) length {length}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise DuplicateEdgeError(f"duplicate link {key}")
            seen.add(key)

    def adjacency(self) -> list[list[tuple[int, float]]]:
        adj: list[list[tuple[int, float]]] = [[] for _ in range(self.node_count)]
        for u, v, length in self.links:
            adj[u].append((v, length))
            adj[v].append((u, length))
        for row in adj:
            row.sort()
        return adj

    def is_connected(self) -> bool:
        if self.node_count == 0:
            return False
        adj = self.adjacency()
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v, _ in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == self.node_count


# -- topology generation -------------------------------------------------


def _er_edges(n: int, p: float, rng: SplitMix64) -> list[tuple[int, int]]:
    return [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if rng.random() < p
    ]


def _ba_edges(n: int, m: int, rng: SplitMix64) -> list[tuple[int, int]]:
    # m seed nodes start isolated; each later node attaches to m distinct
    # targets drawn preferentially by degree, giving m(n - m) links total.
    edges = []
    repeated: list[int] = []
    targets = list(range(m))
    for source in range(m, n):
        edges.extend((min(source, t), max(source, t)) for t in targets)
        repeated.extend(targets)
        repeated.extend([source] * m)
        chosen: set[int] = set()
        while len(chosen) < m:
            chosen.add(repeated[rng.randrange(len(repeated))])
        targets = sorted(chosen)
    return sorted(edges)


def _ws_edges(
    n: int, k: int, rewire: float, rng: SplitMix64
) -> list[tuple[int, int]]:
    edges = set()
    for i in range(n):
        for d in range(1, k // 2 + 1):
            j = (i + d) % n
            edges.add((min(i, j), max(i, j)))
    # rewire pass preserves the link count: each ring edge may move its
    # far endpoint to a uniform non-adjacent node
    for d in range(1, k // 2 + 1):
        for i in range(n):
            if rng.random() >= rewire:
                continue
            j = (i + d) % n
            old = (min(i, j), max(i, j))
            if old not in edges:
                continue
            if sum(1 for a, b in edges if i in (a, b)) >= n - 1:
                continue  # node already adjacent to everyone
            while True:
                w = rng.randrange(n)
                new = (min(i, w), max(i, w))
                if w != i and new not in edges:
                    break
            edges.remove(old)
            edges.add(new)
    return sorted(edges)


def generate(
    model: str,
    node_count: int,
    params: dict | None = None,
    seed: int = 0,
    noise: NoiseParams = DEFAULT_NOISE,
) -> PhysicalNetwork:
    """Generate a connected network; redraws (sub-seeded) if a sample is
    disconnected, up to a retry cap."""
    if node_count < 2:
        raise InvalidParamsError("node_count must be at least 2")
    params = dict(params or {})
    if model == "er":
        p = params.pop("p", 0.3)
        if not 0.0 < p <= 1.0:
            raise InvalidParamsError(f"er edge probability {p} outside (0, 1]")
        build = lambda r: _er_edges(node_count, p, r)
    elif model == "ba":
        m = params.pop("m", 2)
        if not 1 <= m < node_count:
            raise InvalidParamsError(f"ba attachment count {m} invalid")
        build = lambda r: _ba_edges(node_count, m, r)
    elif model == "ws":
        k = params.pop("k", 4)
        rewire = params.pop("rewire", 0.1)
        if k % 2 or not 2 <= k < node_count:
            raise InvalidParamsError(f"ws ring degree {k} invalid")
        if not 0.0 <= rewire <= 1.0:
            raise InvalidParamsError(f"ws rewire probability {rewire} invalid")
        build = lambda r: _ws_edges(node_count, k, rewire, r)
    else:
        raise InvalidParamsError(f"unknown model {model!r}; use er|ba|ws")
    if params:
        raise InvalidParamsError(f"unknown {model} parameters {sorted(params)}")

    lo, hi = LINK_LENGTH_KM
    for attempt in range(_CONNECT_RETRIES):
        rng = SplitMix64(child_seed(seed, attempt))
        edges = build(rng)
        links = tuple((u, v, rng.uniform(lo, hi)) for u, v in edges)
        net = PhysicalNetwork(node_count, links, noise)
        if net.is_connected():
            return net
    raise ConnectivityFailureError(
        f"{model} network stayed disconnected after {_CONNECT_RETRIES} draws"
    )


# -- success probabilities ------------------------------------------------


def link_success(noise: NoiseParams, length_km: float) -> float:
    """Probability of heralded spin-to-spin entanglement over one channel."""
    if length_km <= 0:
        raise InvalidLengthError(f"channel length must be positive, got {length_km}")
    eta2 = math.exp(-length_km / noise.l_att)
    detector = noise.p_bsm * (1.0 - 1.0 / noise.f_dc) ** 2
    if noise.detection == "midpoint":
        return (noise.eta1 * eta2 * (1.0 - noise.epsilon_d)) ** 2 * detector
    return noise.eta1**2 * eta2 * (1.0 - noise.epsilon_d) ** 2 * detector


def _route_probability(
    noise: NoiseParams, total_km: float, hops: int, bsm_per_hop: bool
) -> float:
    p = link_success(noise, total_km)
    if bsm_per_hop and hops >= 3:
        # one extra BSM per intermediate station beyond the baseline one
        p *= noise.p_bsm ** (hops - 2)
    return p


def best_path(
    network: PhysicalNetwork,
    u: int,
    v: int,
    bsm_per_hop: bool = False,
) -> tuple[tuple[int, ...], float]:
    """Maximum-success-probability route between two nodes.

    Under the single-channel model this is the shortest path by summed
    length; ties break toward the lexicographically smallest node
    sequence. With ``bsm_per_hop`` the extra station penalty joins the
    additive cost, so the search runs over (node, capped hop count).
    """
    if u == v:
        raise InvalidParamsError("best_path needs two distinct nodes")
    for node in (u, v):
        if not 0 <= node < network.node_count:
            raise MappingInvalidError(f"node {node} out of range")
    noise = network.noise
    length_cost = (2.0 if noise.detection == "midpoint" else 1.0) / noise.l_att
    bsm_cost = -math.log(noise.p_bsm) if bsm_per_hop else 0.0
    adj = network.adjacency()

    # heap entries: (cost, path); layer = capped hop count fixes the
    # marginal BSM penalty (first hop pays the baseline, second is free,
    # each later hop adds one station)
    done: set[tuple[int, int]] = set()
    heap: list[tuple[float, tuple[int, ...]]] = [(0.0, (u,))]
    while heap:
        cost, path = heapq.heappop(heap)
        node = path[-1]
        layer = min(len(path) - 1, 2)
        if node == v:
            total = sum(
                _link_length(adj, path[i], path[i + 1])
                for i in range(len(path) - 1)
            )
            return path, _route_probability(
                noise, total, len(path) - 1, bsm_per_hop
            )
        if (node, layer) in done:
            continue
        done.add((node, layer))
        hop_penalty = bsm_cost if layer in (0, 2) else 0.0
        for nxt, length in adj[node]:
            if (nxt, min(layer + 1, 2)) not in done:
                heapq.heappush(
                    heap,
                    (cost + length * length_cost + hop_penalty, path + (nxt,)),
                )
    raise UnreachableError(f"no route between nodes {u} and {v}")


def _link_length(adj, u: int, v: int) -> float:
    for node, length in adj[u]:
        if node == v:
            return length
    raise UnreachableError(f"no direct link between {u} and {v}")


def validate_mapping(
    mapping: dict[int, int], qubit_count: int, node_count: int
):
    """Mapping must place every qubit on its own in-range node."""
    if sorted(mapping) != list(range(qubit_count)):
        raise MappingInvalidError(
            f"mapping must cover qubits 0..{qubit_count - 1}"
        )
    if len(set(mapping.values())) != len(mapping):
        raise MappingInvalidError("two qubits mapped to the same node")
    for node in mapping.values():
        if not 0 <= node < node_count:
            raise MappingInvalidError(f"node {node} out of range")


def pair_probabilities(
    network: PhysicalNetwork,
    mapping: dict[int, int],
    bsm_per_hop: bool = False,
) -> np.ndarray:
    """Symmetric matrix of best-route success probabilities between the
    mapped nodes of every qubit pair; the diagonal is unused (NaN)."""
    q = len(mapping)
    validate_mapping(mapping, q, network.node_count)
    probs = np.full((q, q), np.nan)
    for i in range(q):
        for j in range(i + 1, q):
            _, p = best_path(network, mapping[i], mapping[j], bsm_per_hop)
            probs[i, j] = probs[j, i] = p
    return probs


# -- text format -----------------------------------------------------------


def parse_network(text: str, noise: NoiseParams = DEFAULT_NOISE) -> PhysicalNetwork:
    node_count = None
    links = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if node_count is None:
            if fields[0] != "nodes" or len(fields) != 2:
                raise ValueError(f"expected 'nodes <N>' first, got {line!r}")
            node_count = int(fields[1])
        elif fields[0] == "link" and len(fields) == 4:
            links.append((int(fields[1]), int(fields[2]), float(fields[3])))
        else:
            raise ValueError(f"unrecognized network line: {line!r}")
    if node_count is None:
        raise ValueError("network file is empty")
    return PhysicalNetwork(node_count, tuple(links), noise)


def format_network(network: PhysicalNetwork) -> str:
    lines = [f"nodes {network.node_count}"]
    lines += [
        f"link {u} {v} {length!r}" for u, v, length in network.links
    ]
    return "\n".join(lines) + "\n"


def with_noise(network: PhysicalNetwork, noise: NoiseParams) -> PhysicalNetwork:
    return replace(network, noise=noise)

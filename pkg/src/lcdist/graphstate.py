"""Labeled graph states encoded as edge bitmasks, plus the rewrite calculus.

A state on q qubits stores its edge set in one integer: the unordered pair
(i, j) with i < j occupies bit j*(j-1)//2 + i, so masks grow contiguously
with q. Vertices are dense indices 0..q-1. An optional label map assigns
qubits to physical network nodes.

All operations are pure: they validate, then return a new ``GraphState``.
Vertex deletion (measurements, fusion) re-indexes the survivors downward;
:func:`removal_index_map` gives the old-to-new index map so chained
operations stay addressable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import (
    CoLocationViolationError,
    DuplicateEdgeError,
    IndexOutOfRangeError,
    NotANeighborError,
    SelfLoopError,
    StateTooSmallError,
)

MAX_QUBITS = 16


def pair_bit(i: int, j: int) -> int:
    """Bit index of the unordered pair (i, j), i != j."""
    if i > j:
        i, j = j, i
    return j * (j - 1) // 2 + i


def mask_bit_count(qubit_count: int) -> int:
    return qubit_count * (qubit_count - 1) // 2


def bit_to_pair(bit: int) -> tuple[int, int]:
    """Inverse of :func:`pair_bit`: bit index -> (i, j) with i < j."""
    j = 1
    while (j + 1) * j // 2 <= bit:
        j += 1
    return bit - j * (j - 1) // 2, j


def _bits_of(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class GraphState:
    """Immutable labeled graph state.

    ``labels`` is stored as a sorted tuple of (qubit, node) pairs so the
    value stays hashable; use :meth:`label_map` for dict access. States
    produced by measurement may have a single qubit; states built through
    :func:`from_edges` are capped at ``MAX_QUBITS``.
    """

    qubit_count: int
    edges: int
    labels: tuple[tuple[int, int], ...] | None = field(default=None)

    def __post_init__(self):
        if self.qubit_count < 1:
            raise IndexOutOfRangeError("a graph state needs at least one qubit")
        if self.edges < 0 or self.edges >> mask_bit_count(self.qubit_count):
            raise IndexOutOfRangeError(
                f"edge mask {self.edges:#x} has bits beyond q={self.qubit_count}"
            )

    # -- basic queries -------------------------------------------------

    def has_edge(self, a: int, b: int) -> bool:
        self._check_vertex(a)
        self._check_vertex(b)
        if a == b:
            return False
        return bool(self.edges >> pair_bit(a, b) & 1)

    def neighbor_mask(self, a: int) -> int:
        """Bitmask over vertices adjacent to ``a``."""
        self._check_vertex(a)
        out = 0
        for b in range(self.qubit_count):
            if b != a and self.edges >> pair_bit(a, b) & 1:
                out |= 1 << b
        return out

    def neighbors(self, a: int) -> list[int]:
        return list(_bits_of(self.neighbor_mask(a)))

    def degree(self, a: int) -> int:
        return self.neighbor_mask(a).bit_count()

    def edge_count(self) -> int:
        return self.edges.bit_count()

    def edge_list(self) -> list[tuple[int, int]]:
        """Edges as (i, j) pairs with i < j, in canonical bit order."""
        return [bit_to_pair(b) for b in _bits_of(self.edges)]

    def label_map(self) -> dict[int, int] | None:
        return None if self.labels is None else dict(self.labels)

    def label_of(self, a: int) -> int | None:
        self._check_vertex(a)
        if self.labels is None:
            return None
        return dict(self.labels).get(a)

    def is_connected(self) -> bool:
        if self.qubit_count == 1:
            return True
        seen = 1
        frontier = [0]
        while frontier:
            v = frontier.pop()
            for w in _bits_of(self.neighbor_mask(v)):
                if not seen >> w & 1:
                    seen |= 1 << w
                    frontier.append(w)
        return seen == (1 << self.qubit_count) - 1

    def _check_vertex(self, a: int):
        if not 0 <= a < self.qubit_count:
            raise IndexOutOfRangeError(
                f"vertex {a} out of range for q={self.qubit_count}"
            )

    def _with_edges(self, edges: int) -> "GraphState":
        return GraphState(self.qubit_count, edges, self.labels)


def from_edges(
    qubit_count: int,
    edge_list,
    labels: dict[int, int] | None = None,
) -> GraphState:
    """Build a graph state from an explicit edge list.

    Each listed pair is one CZ application on |+> qubits. Duplicate pairs
    are rejected rather than silently toggled. Labels, when given, must be
    injective (one qubit per physical node).
    """
    if not 2 <= qubit_count <= MAX_QUBITS:
        raise IndexOutOfRangeError(
            f"qubit_count must be in [2, {MAX_QUBITS}], got {qubit_count}"
        )
    mask = 0
    for a, b in edge_list:
        if not (0 <= a < qubit_count and 0 <= b < qubit_count):
            raise IndexOutOfRangeError(
                f"edge ({a}, {b}) out of range for q={qubit_count}"
            )
        if a == b:
            raise SelfLoopError(f"self-loop on vertex {a}")
        bit = 1 << pair_bit(a, b)
        if mask & bit:
            raise DuplicateEdgeError(f"edge ({a}, {b}) listed twice")
        mask |= bit
    packed = _pack_labels(labels, qubit_count, require_injective=True)
    return GraphState(qubit_count, mask, packed)


def _pack_labels(labels, qubit_count, require_injective):
    if labels is None:
        return None
    for v in labels:
        if not 0 <= v < qubit_count:
            raise IndexOutOfRangeError(f"label for unknown vertex {v}")
    if require_injective and len(set(labels.values())) != len(labels):
        raise CoLocationViolationError("label map must be injective")
    return tuple(sorted(labels.items()))


def toggle_cz(state: GraphState, a: int, b: int) -> GraphState:
    """Flip the edge (a, b): the action of CZ between two graph-state qubits."""
    state._check_vertex(a)
    state._check_vertex(b)
    if a == b:
        raise SelfLoopError("CZ needs two distinct qubits")
    return state._with_edges(state.edges ^ (1 << pair_bit(a, b)))


def local_complement(state: GraphState, a: int) -> GraphState:
    """Complement the subgraph induced by the neighborhood of ``a``."""
    nbrs = state.neighbors(a)
    edges = state.edges
    for b, c in itertools.combinations(nbrs, 2):
        edges ^= 1 << pair_bit(b, c)
    return state._with_edges(edges)


def removal_index_map(qubit_count: int, removed: int) -> dict[int, int]:
    """Old-to-new vertex indices after deleting ``removed``."""
    return {
        v: (v if v < removed else v - 1)
        for v in range(qubit_count)
        if v != removed
    }


def _delete_vertex(state: GraphState, a: int) -> GraphState:
    if state.qubit_count == 1:
        raise StateTooSmallError("cannot remove the last qubit")
    idx = removal_index_map(state.qubit_count, a)
    mask = 0
    for i, j in state.edge_list():
        if a in (i, j):
            continue
        mask |= 1 << pair_bit(idx[i], idx[j])
    new_labels = None
    if state.labels is not None:
        new_labels = tuple(
            sorted((idx[v], node) for v, node in state.labels if v != a)
        )
    return GraphState(state.qubit_count - 1, mask, new_labels)


def measure_z(state: GraphState, a: int) -> GraphState:
    """Z-measurement rule: delete ``a`` and all its incident edges.

    Returns the +1 outcome branch; byproduct corrections are accounted for
    in the success-probability bookkeeping, not at graph level.
    """
    state._check_vertex(a)
    return _delete_vertex(state, a)


def measure_y(state: GraphState, a: int) -> GraphState:
    """Y-measurement rule: locally complement at ``a``, then delete it."""
    state._check_vertex(a)
    return _delete_vertex(local_complement(state, a), a)


def measure_x(state: GraphState, a: int, b0: int) -> GraphState:
    """X-measurement rule with helper neighbor ``b0``.

    LC at b0, Y-measure ``a``, then LC at b0 again (shifted past the
    deleted index).
    """
    state._check_vertex(a)
    state._check_vertex(b0)
    if not state.has_edge(a, b0):
        raise NotANeighborError(f"vertex {b0} is not a neighbor of {a}")
    stage = measure_y(local_complement(state, b0), a)
    b0_new = b0 if b0 < a else b0 - 1
    return local_complement(stage, b0_new)


def fuse(state: GraphState, a: int, b: int) -> GraphState:
    """Merge qubit ``b`` into ``a``: CZ on (a, b) followed by Y-measuring b.

    When both qubits carry labels they must sit on the same network node.
    """
    state._check_vertex(a)
    state._check_vertex(b)
    if a == b:
        raise SelfLoopError("fusion needs two distinct qubits")
    la, lb = state.label_of(a), state.label_of(b)
    if la is not None and lb is not None and la != lb:
        raise CoLocationViolationError(
            f"qubits {a} (node {la}) and {b} (node {lb}) are not co-located"
        )
    return measure_y(toggle_cz(state, a, b), b)


# -- convenience constructors -----------------------------------------


def path_state(qubit_count: int) -> GraphState:
    return from_edges(qubit_count, [(i, i + 1) for i in range(qubit_count - 1)])


def star_state(qubit_count: int, root: int = 0) -> GraphState:
    return from_edges(
        qubit_count, [(root, v) for v in range(qubit_count) if v != root]
    )


def complete_state(qubit_count: int) -> GraphState:
    return from_edges(
        qubit_count, list(itertools.combinations(range(qubit_count), 2))
    )


# -- text format -------------------------------------------------------
#
# line 1: q=<int>; then one "edge <u> <v>" line per edge and optional
# "map <qubit> <node>" lines. '#' starts a comment; blank lines ignored.


def parse_graph(text: str) -> GraphState:
    qubit_count = None
    edges = []
    labels: dict[int, int] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if qubit_count is None:
            if not line.startswith("q=") and not line.startswith("q ="):
                raise ValueError(f"expected 'q=<int>' first, got {line!r}")
            qubit_count = int(line.split("=", 1)[1])
            continue
        fields = line.split()
        if fields[0] == "edge" and len(fields) == 3:
            edges.append((int(fields[1]), int(fields[2])))
        elif fields[0] == "map" and len(fields) == 3:
            labels[int(fields[1])] = int(fields[2])
        else:
            raise ValueError(f"unrecognized graph line: {line!r}")
    if qubit_count is None:
        raise ValueError("graph file is empty")
    return from_edges(qubit_count, edges, labels or None)


def format_graph(state: GraphState) -> str:
    lines = [f"q={state.qubit_count}"]
    lines += [f"edge {i} {j}" for i, j in state.edge_list()]
    if state.labels is not None:
        lines += [f"map {v} {node}" for v, node in state.labels]
    return "\n".join(lines) + "\n"

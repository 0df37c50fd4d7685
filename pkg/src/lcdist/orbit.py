"""LC-orbit enumeration, the full connected-graph census, and iso-merging.

Labeled orbits are BFS closures of the edge-bitmask graph under local
complementation. The census sweeps every mask ascending, so orbit ids,
roots (the minimal member mask) and witnesses are all deterministic.

Isomorphism classes are built by closing each orbit under vertex
relabeling: permuting any member of an orbit lands in an isomorphic
orbit, and conversely every isomorphic orbit is some permutation image,
so unioning the orbits hit by all q! permutations of one root per class
yields the exact partition without a graph-canonicalization dependency.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from . import graphstate
from .errors import DisconnectedError, TooLargeError
from .graphstate import GraphState

ENUMERATION_MAX_QUBITS = 12
CENSUS_MIN_QUBITS = 3
CENSUS_MAX_QUBITS = 8
_KERNEL_THRESHOLD = 6  # below this the pure-Python sweep is faster than JIT


def _pair_bit_table(q: int) -> np.ndarray:
    pb = np.zeros((q, q), dtype=np.uint8)
    for i in range(q):
        for j in range(q):
            if i != j:
                pb[i, j] = graphstate.pair_bit(i, j)
    return pb


def _clique_mask_table(q: int) -> np.ndarray:
    """ptable[n] = edge mask of the complete graph on vertex set n."""
    pt = np.zeros(1 << q, dtype=np.int64)
    for n in range(1 << q):
        verts = [v for v in range(q) if n >> v & 1]
        acc = 0
        for a, b in itertools.combinations(verts, 2):
            acc |= 1 << graphstate.pair_bit(a, b)
        pt[n] = acc
    return pt


def _neighbor_mask(mask: int, q: int, a: int) -> int:
    out = 0
    for b in range(q):
        if b != a and mask >> graphstate.pair_bit(a, b) & 1:
            out |= 1 << b
    return out


def _mask_connected(mask: int, q: int) -> bool:
    seen = 1
    stack = [0]
    while stack:
        v = stack.pop()
        nbrs = _neighbor_mask(mask, q, v)
        add = nbrs & ~seen
        seen |= add
        while add:
            low = add & -add
            stack.append(low.bit_length() - 1)
            add ^= low
    return seen == (1 << q) - 1


def lc_mask(mask: int, q: int, a: int, ptable=None) -> int:
    """Local complementation at ``a`` directly on an edge bitmask."""
    nbrs = _neighbor_mask(mask, q, a)
    if ptable is not None:
        return mask ^ int(ptable[nbrs])
    acc = 0
    verts = list(graphstate._bits_of(nbrs))
    for b, c in itertools.combinations(verts, 2):
        acc |= 1 << graphstate.pair_bit(b, c)
    return mask ^ acc


# -- single-orbit enumeration -------------------------------------------


@dataclass
class Orbit:
    """BFS closure of one labeled graph state under LC moves.

    ``witness`` maps each member mask to (predecessor mask, pivot); the
    chain from any member back to ``root`` replays in reverse as the
    pivot sequence reaching it.
    """

    qubit_count: int
    root: int
    members: set[int]
    witness: dict[int, tuple[int, int]]

    def witness_to(self, mask: int) -> list[int]:
        pivots = []
        m = mask
        while m != self.root:
            pred, pivot = self.witness[m]
            pivots.append(pivot)
            m = pred
        pivots.reverse()
        return pivots


def enumerate_orbit(state: GraphState) -> Orbit:
    """Close {state} under LC at every vertex (FIFO, ascending pivots)."""
    if state.qubit_count > ENUMERATION_MAX_QUBITS:
        raise TooLargeError(
            f"orbit enumeration supports q <= {ENUMERATION_MAX_QUBITS}"
        )
    if not state.is_connected():
        raise DisconnectedError("orbit enumeration needs a connected state")
    q = state.qubit_count
    ptable = _clique_mask_table(q)
    root = state.edges
    members = {root}
    witness: dict[int, tuple[int, int]] = {}
    queue = deque([root])
    while queue:
        m = queue.popleft()
        for a in range(q):
            m2 = lc_mask(m, q, a, ptable)
            if m2 not in members:
                members.add(m2)
                witness[m2] = (m, a)
                queue.append(m2)
    return Orbit(q, root, members, witness)


def orbit_optimum(state: GraphState, cost, mode: str = "min"):
    """Ground-truth orbit scan: (argopt member, witness pivots).

    Ties in cost break toward the smallest edge bitmask.
    """
    if mode not in ("min", "max"):
        raise ValueError(f"mode must be 'min' or 'max', got {mode!r}")
    orbit = enumerate_orbit(state)
    sign = 1.0 if mode == "min" else -1.0
    best_mask = None
    best_key = None
    for m in sorted(orbit.members):
        value = cost(GraphState(state.qubit_count, m, state.labels))
        key = (sign * value, m)
        if best_key is None or key < best_key:
            best_key = key
            best_mask = m
    best = GraphState(state.qubit_count, best_mask, state.labels)
    return best, orbit.witness_to(best_mask)


# -- full census ---------------------------------------------------------


@dataclass(frozen=True)
class ClassStats:
    class_id: int
    labeled_orbit_count: int
    labeled_size_min: int
    labeled_size_max: int
    min_edges: int
    representative_mask: int


@dataclass
class OrbitCensus:
    qubit_count: int
    orbit_roots: np.ndarray
    orbit_sizes: np.ndarray
    orbit_min_edges: np.ndarray
    orbit_class: np.ndarray
    classes: list[ClassStats]
    connected_count: int

    def labeled_orbit_count(self) -> int:
        return len(self.orbit_roots)

    def labeled_orbit_sizes(self) -> list[int]:
        return sorted(int(s) for s in self.orbit_sizes)


def _sweep_python(q: int):
    ptable = _clique_mask_table(q)
    n_masks = 1 << graphstate.mask_bit_count(q)
    orbit_id: dict[int, int] = {}
    roots, sizes, min_edges = [], [], []
    for root in range(n_masks):
        if root in orbit_id or not _mask_connected(root, q):
            continue
        oid = len(roots)
        orbit_id[root] = oid
        queue = deque([root])
        size = 0
        min_ec = 127
        while queue:
            m = queue.popleft()
            size += 1
            min_ec = min(min_ec, m.bit_count())
            for a in range(q):
                m2 = lc_mask(m, q, a, ptable)
                if m2 not in orbit_id:
                    orbit_id[m2] = oid
                    queue.append(m2)
        roots.append(root)
        sizes.append(size)
        min_edges.append(min_ec)

    def lookup(masks: np.ndarray) -> np.ndarray:
        return np.array([orbit_id[int(m)] for m in masks], dtype=np.int64)

    return (
        np.array(roots, dtype=np.int64),
        np.array(sizes, dtype=np.int64),
        np.array(min_edges, dtype=np.int64),
        lookup,
    )


def _sweep_kernel(q: int):
    from . import _censuskernel as ck

    pb = _pair_bit_table(q)
    ptable = _clique_mask_table(q)
    n_masks = 1 << graphstate.mask_bit_count(q)
    orbit_cap, frontier_cap = 1 << 24, 1 << 22
    while True:
        orbit_id = np.full(n_masks, ck.UNVISITED, dtype=np.uint32)
        roots = np.zeros(orbit_cap, dtype=np.int64)
        sizes = np.zeros(orbit_cap, dtype=np.int64)
        min_edges = np.zeros(orbit_cap, dtype=np.int64)
        frontier = np.zeros(frontier_cap, dtype=np.int64)
        n = ck.sweep(q, pb, ptable, orbit_id, roots, sizes, min_edges, frontier)
        if n == -1:
            frontier_cap *= 4
        elif n == -2:
            orbit_cap *= 4
        else:
            break

    def lookup(masks: np.ndarray) -> np.ndarray:
        return orbit_id[masks].astype(np.int64)

    return roots[:n].copy(), sizes[:n].copy(), min_edges[:n].copy(), lookup


def _permute_mask_batch(mask: int, perms: np.ndarray) -> np.ndarray:
    """Apply every vertex permutation to one edge mask at once."""
    pairs = [graphstate.bit_to_pair(b) for b in graphstate._bits_of(mask)]
    if not pairs:
        return np.zeros(len(perms), dtype=np.int64)
    lo = perms[:, [p[0] for p in pairs]]
    hi = perms[:, [p[1] for p in pairs]]
    a, b = np.minimum(lo, hi), np.maximum(lo, hi)
    bits = b * (b - 1) // 2 + a
    return np.bitwise_or.reduce(np.int64(1) << bits, axis=1)


def _merge_iso_classes(q, roots, sizes, min_edges, lookup):
    perms = np.array(
        list(itertools.permutations(range(q))), dtype=np.int64
    )
    n = len(roots)
    parent = np.arange(n, dtype=np.int64)

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    class_of_root: dict[int, int] = {}
    class_seed, class_repr = [], []
    for o in range(n):
        if find(o) in class_of_root:
            continue
        permuted = _permute_mask_batch(int(roots[o]), perms)
        hit = np.unique(lookup(np.unique(permuted)))
        for other in hit:
            ra, rb = find(o), find(int(other))
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        class_of_root[find(o)] = len(class_seed)
        class_seed.append(o)
        class_repr.append(int(permuted.min()))

    orbit_class = np.array([class_of_root[find(o)] for o in range(n)])
    classes = []
    for cid, seed in enumerate(class_seed):
        idx = np.flatnonzero(orbit_class == cid)
        classes.append(
            ClassStats(
                class_id=cid + 1,
                labeled_orbit_count=len(idx),
                labeled_size_min=int(sizes[idx].min()),
                labeled_size_max=int(sizes[idx].max()),
                min_edges=int(min_edges[idx].min()),
                representative_mask=class_repr[cid],
            )
        )
    return orbit_class, classes


def full_census(qubit_count: int, use_kernel: bool | None = None) -> OrbitCensus:
    """Partition all connected labeled graphs on q vertices into labeled
    orbits, then merge those into isomorphism classes."""
    if not CENSUS_MIN_QUBITS <= qubit_count <= CENSUS_MAX_QUBITS:
        raise TooLargeError(
            f"census supports {CENSUS_MIN_QUBITS} <= q <= {CENSUS_MAX_QUBITS},"
            f" got {qubit_count}"
        )
    if use_kernel is None:
        use_kernel = qubit_count >= _KERNEL_THRESHOLD
    sweep = _sweep_kernel if use_kernel else _sweep_python
    roots, sizes, min_edges, lookup = sweep(qubit_count)
    orbit_class, classes = _merge_iso_classes(
        qubit_count, roots, sizes, min_edges, lookup
    )
    return OrbitCensus(
        qubit_count=qubit_count,
        orbit_roots=roots,
        orbit_sizes=sizes,
        orbit_min_edges=min_edges,
        orbit_class=orbit_class,
        classes=classes,
        connected_count=int(sizes.sum()),
    )


def min_edge_cost(census: OrbitCensus) -> int:
    """Worst case over classes of the orbit-minimal edge count."""
    return max(c.min_edges for c in census.classes)


def count_connected(qubit_count: int) -> int:
    """Connectivity-only pass over all masks, independent of the census."""
    n_masks = 1 << graphstate.mask_bit_count(qubit_count)
    if qubit_count >= _KERNEL_THRESHOLD:
        from . import _censuskernel as ck

        return int(
            ck.count_connected(qubit_count, _pair_bit_table(qubit_count), n_masks)
        )
    return sum(
        1 for m in range(n_masks) if _mask_connected(m, qubit_count)
    )


def connected_graph_counts(max_n: int) -> list[int]:
    """Counts of connected labeled graphs on 1..max_n vertices, from the
    classical recurrence c_n = 2^C(n,2) - sum_k C(n-1,k-1) c_k 2^C(n-k,2)."""
    counts = []
    for n in range(1, max_n + 1):
        total = 1 << (n * (n - 1) // 2)
        for k in range(1, n):
            total -= (
                math.comb(n - 1, k - 1)
                * counts[k - 1]
                * (1 << ((n - k) * (n - k - 1) // 2))
            )
        counts.append(total)
    return counts

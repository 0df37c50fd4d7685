"""Compiled kernels for the exhaustive orbit sweep over edge bitmasks.

Kept in a separate module so importing the package does not pay the numba
import unless a large census is actually requested. All loops are integer
only; results are bit-for-bit deterministic.
"""

import numpy as np
from numba import njit

UNVISITED = np.uint32(0xFFFFFFFF)


@njit(cache=True)
def _connected(mask, q, pb):
    seen = 1
    stack = np.empty(16, dtype=np.int64)
    stack[0] = 0
    sp = 1
    while sp > 0:
        sp -= 1
        v = stack[sp]
        for w in range(q):
            if w != v and (mask >> pb[v, w]) & 1 and not (seen >> w) & 1:
                seen |= 1 << w
                stack[sp] = w
                sp += 1
    return seen == (1 << q) - 1


@njit(cache=True)
def sweep(q, pb, ptable, orbit_id, roots, sizes, min_edges, frontier):
    """Assign every connected mask to a labeled orbit by ascending-root BFS.

    Returns the orbit count, or -1 / -2 if the frontier / orbit buffers
    overflow (caller retries with larger buffers).
    """
    n_masks = orbit_id.shape[0]
    n_orbits = 0
    for root in range(n_masks):
        if orbit_id[root] != UNVISITED:
            continue
        if not _connected(root, q, pb):
            continue
        if n_orbits >= roots.shape[0]:
            return -2
        oid = np.uint32(n_orbits)
        orbit_id[root] = oid
        frontier[0] = root
        head, tail = 0, 1
        size = 0
        min_ec = 127
        while head < tail:
            m = frontier[head]
            head += 1
            size += 1
            t = m
            ec = 0
            while t:
                t &= t - 1
                ec += 1
            if ec < min_ec:
                min_ec = ec
            for a in range(q):
                nm = 0
                for b in range(q):
                    if b != a and (m >> pb[a, b]) & 1:
                        nm |= 1 << b
                m2 = m ^ ptable[nm]
                if orbit_id[m2] == UNVISITED:
                    if tail >= frontier.shape[0]:
                        return -1
                    orbit_id[m2] = oid
                    frontier[tail] = m2
                    tail += 1
        roots[n_orbits] = root
        sizes[n_orbits] = size
        min_edges[n_orbits] = min_ec
        n_orbits += 1
    return n_orbits


@njit(cache=True)
def count_connected(q, pb, n_masks):
    """Connectivity-only pass, independent of the orbit sweep."""
    count = 0
    for mask in range(n_masks):
        if _connected(mask, q, pb):
            count += 1
    return count

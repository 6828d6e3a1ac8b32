"""Compiled inner loops.

Two hot spots dominate at desk scale: the downward face sweep (millions of
``prune`` calls for n = 6) and all-sources BFS on skeleta with up to ~10^5
vertices (n = 7).  Both are written for numba over int64 bitmasks, which is
enough while the grid has at most 63 edges and 63 points (n <= 7).  Callers
check :func:`fits_int64` and use the pure-Python paths otherwise.
"""

from __future__ import annotations

import numpy as np
from numba import njit, types
from numba.typed import Dict, List


def fits_int64(grid) -> bool:
    return grid.num_edges <= 62 and len(grid.points) <= 62


def grid_arrays(grid):
    """Edge endpoint arrays plus origin/terminal point bitmasks."""
    tails = np.asarray(grid.tails, dtype=np.int64)
    heads = np.asarray(grid.heads, dtype=np.int64)
    term = 0
    for t in grid.terminal_ids:
        term |= 1 << t
    return tails, heads, np.int64(1 << grid.origin), np.int64(term)


@njit(cache=True)
def prune64(mask, tails, heads, origin_bit, term_bits):
    # edges are topologically ordered, so one sweep each way suffices
    E = tails.shape[0]
    reach = origin_bit
    for i in range(E):
        if (mask >> i) & 1 and (reach >> tails[i]) & 1:
            reach |= np.int64(1) << heads[i]
    if reach & term_bits != term_bits:
        return np.int64(-1)
    co = term_bits
    for i in range(E - 1, -1, -1):
        if (mask >> i) & 1 and (co >> heads[i]) & 1:
            co |= np.int64(1) << tails[i]
    out = np.int64(0)
    for i in range(E):
        if (mask >> i) & 1 and (reach >> tails[i]) & 1 and (co >> heads[i]) & 1:
            out |= np.int64(1) << i
    return out


@njit(cache=True)
def face_sweep64(top, tails, heads, origin_bit, term_bits, rem, dtop, max_faces):
    """Level-by-level enumeration of all nonempty faces below ``top``.

    The faces covered by ``D`` are the maximal elements among the single
    facet meets ``prune(D - e)``.  Returns ``(fvec, bad, count)`` where
    ``bad`` counts covers landing outside the next grade (0 for a graded
    poset) and ``count`` is -1 when ``max_faces`` was exceeded.
    """
    seen = Dict.empty(types.int64, types.int64)
    seen[top] = dtop
    level = List.empty_list(types.int64)
    level.append(top)
    fvec = np.zeros(dtop + 1, np.int64)
    fvec[dtop] = 1
    bad = 0
    d = dtop
    while len(level) > 0 and d > 0:
        nxt = List.empty_list(types.int64)
        for D in level:
            kids = List.empty_list(types.int64)
            for e in rem:
                if (D >> e) & 1:
                    F = prune64(D & ~(np.int64(1) << e), tails, heads, origin_bit, term_bits)
                    if F >= 0:
                        kids.append(F)
            for a in kids:
                maximal = True
                for b in kids:
                    if b != a and (a & b) == a:
                        maximal = False
                        break
                if not maximal:
                    continue
                if a not in seen:
                    seen[a] = d - 1
                    nxt.append(a)
                    fvec[d - 1] += 1
                    if len(seen) > max_faces:
                        return fvec, bad, -1
                if seen[a] != d - 1:
                    bad += 1
        level = nxt
        d -= 1
    return fvec, bad, len(seen)


@njit(cache=True)
def _bitset_levels(indptr, indices, start, nsrc):
    """Simultaneous BFS from sources ``start .. start+nsrc-1``.

    Each vertex carries a row of ``nsrc`` bits (one per source).  Returns
    the eccentricity of each source and whether every source reached every
    vertex.
    """
    V = indptr.shape[0] - 1
    W = (nsrc + 63) // 64
    seen = np.zeros((V, W), np.uint64)
    front = np.zeros((V, W), np.uint64)
    nxt = np.zeros((V, W), np.uint64)
    ecc = np.zeros(nsrc, np.int64)
    for k in range(nsrc):
        v = start + k
        seen[v, k >> 6] |= np.uint64(1) << np.uint64(k & 63)
        front[v, k >> 6] |= np.uint64(1) << np.uint64(k & 63)
    level = 0
    active = np.zeros(W, np.uint64)
    acc = np.zeros(W, np.uint64)
    while True:
        any_new = False
        for w in range(W):
            active[w] = np.uint64(0)
        for v in range(V):
            for w in range(W):
                acc[w] = np.uint64(0)
            # OR whole neighbour rows; rows are contiguous in memory
            for p in range(indptr[v], indptr[v + 1]):
                row = front[indices[p]]
                for w in range(W):
                    acc[w] |= row[w]
            for w in range(W):
                a = acc[w] & ~seen[v, w]
                nxt[v, w] = a
                if a:
                    any_new = True
                    seen[v, w] |= a
                    active[w] |= a
        if not any_new:
            break
        level += 1
        # a source's eccentricity is the last level at which it grew
        for w in range(W):
            if active[w]:
                for b in range(64):
                    if (active[w] >> np.uint64(b)) & np.uint64(1):
                        ecc[w * 64 + b] = level
        front, nxt = nxt, front
    full = True
    for v in range(V):
        for k in range(nsrc):
            if not (seen[v, k >> 6] >> np.uint64(k & 63)) & np.uint64(1):
                full = False
                break
        if not full:
            break
    return ecc, full


def eccentricities(indptr, indices, batch: int = 4096):
    """Eccentricity of every vertex of a CSR graph; ``None`` if disconnected."""
    V = len(indptr) - 1
    out = np.zeros(V, np.int64)
    for start in range(0, V, batch):
        nsrc = min(batch, V - start)
        ecc, full = _bitset_levels(indptr, indices, start, nsrc)
        if not full:
            return None
        out[start:start + nsrc] = ecc
    return out


@njit(cache=True)
def bfs64(indptr, indices, src, dist, queue):
    V = indptr.shape[0] - 1
    for v in range(V):
        dist[v] = -1
    dist[src] = 0
    queue[0] = src
    head, tail = 0, 1
    while head < tail:
        u = queue[head]
        head += 1
        for p in range(indptr[u], indptr[u + 1]):
            w = indices[p]
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue[tail] = w
                tail += 1
    return tail


@njit(cache=True)
def bounding_diameter(indptr, indices):
    """Exact diameter by eccentricity bounds (Takes and Kosters, 2011).

    Each BFS from ``v`` tightens ``ecc(w)`` to within
    ``[max(d, ecc(v) - d), ecc(v) + d]`` for ``d = dist(v, w)``; vertices
    that can no longer affect either bound on the diameter are dropped.
    Returns ``(diameter, connected, number_of_bfs_runs)``.
    """
    V = indptr.shape[0] - 1
    lo = np.zeros(V, np.int64)
    hi = np.full(V, V, np.int64)
    alive = np.ones(V, np.bool_)
    n_alive = V
    dist = np.empty(V, np.int64)
    queue = np.empty(V, np.int64)
    dlo, dhi = 0, V
    runs = 0
    pick_high = False
    while n_alive > 0 and dlo < dhi:
        # alternate between the largest upper and the smallest lower bound
        best = -1
        for v in range(V):
            if alive[v]:
                if best < 0:
                    best = v
                elif pick_high:
                    if hi[v] > hi[best] or (hi[v] == hi[best] and lo[v] < lo[best]):
                        best = v
                else:
                    if lo[v] < lo[best] or (lo[v] == lo[best] and hi[v] > hi[best]):
                        best = v
        pick_high = not pick_high
        reached = bfs64(indptr, indices, best, dist, queue)
        runs += 1
        if reached < V:
            return -1, False, runs
        ecc = 0
        for v in range(V):
            if dist[v] > ecc:
                ecc = dist[v]
        lo[best] = ecc
        hi[best] = ecc
        if ecc > dlo:
            dlo = ecc
        for w in range(V):
            d = dist[w]
            a = d if d > ecc - d else ecc - d
            if a > lo[w]:
                lo[w] = a
            if ecc + d < hi[w]:
                hi[w] = ecc + d
            if lo[w] > dlo:
                dlo = lo[w]
        dhi = 0
        for w in range(V):
            if hi[w] > dhi:
                dhi = hi[w]
        for w in range(V):
            if alive[w]:
                if lo[w] == hi[w] or (hi[w] <= dlo and 2 * lo[w] >= dhi):
                    alive[w] = False
                    n_alive -= 1
    return dlo, True, runs

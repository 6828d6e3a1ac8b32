"""The 1-skeleton: adjacency, BFS diameter, zigzag vertices and an explicit
short walk between any two vertices.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .grid import GammaGrid
from .ladder import (
    BudgetExceeded,
    GridMismatch,
    LadderDiagram,
    _vertex_masks,
    axis_mask,
)
from .partition import diameter_formula


class DisconnectedSkeleton(RuntimeError):
    pass


class ConnectError(RuntimeError):
    pass


@dataclass(eq=False)
class SkeletonGraph:
    grid: GammaGrid
    vertices: list  # sorted vertex masks
    adj: list  # adj[i] = sorted neighbour indices

    def __post_init__(self):
        self.index = {v: i for i, v in enumerate(self.vertices)}

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def edges(self):
        for i, nb in enumerate(self.adj):
            for j in nb:
                if i < j:
                    yield i, j

    def vertex(self, i: int) -> LadderDiagram:
        return LadderDiagram(self.grid, self.vertices[i])

    def csr(self):
        indptr = np.zeros(len(self.adj) + 1, np.int64)
        indptr[1:] = np.cumsum([len(a) for a in self.adj])
        indices = np.fromiter((j for a in self.adj for j in a), np.int64, count=int(indptr[-1]))
        return indptr, indices

    def distances_from(self, i: int) -> list:
        dist = [-1] * len(self.adj)
        dist[i] = 0
        q = deque([i])
        while q:
            u = q.popleft()
            for w in self.adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    q.append(w)
        return dist

    def distance(self, v, w) -> int:
        a = self.index[v.mask if isinstance(v, LadderDiagram) else v]
        b = self.index[w.mask if isinstance(w, LadderDiagram) else w]
        return self.distances_from(a)[b]


# --- construction ---------------------------------------------------------


def _tree_parents(grid: GammaGrid, mask: int):
    """In-edge of every non-origin point of a tree diagram, plus a point mask."""
    parent = {}
    intree = 1 << grid.origin
    heads = grid.heads
    for i in grid.ids_of(mask):
        parent[heads[i]] = i
        intree |= 1 << heads[i]
    return parent, intree


def _out_masks(grid: GammaGrid) -> list:
    out = [0] * len(grid.points)
    for i, t in enumerate(grid.tails):
        out[t] |= 1 << i
    return out


def _swap_in(grid, v, parent, seg, b, outmask, is_term):
    """Other vertex of the 1-face ``v | seg`` where ``seg`` ends at tree point ``b``.

    Drop the tree edge entering ``b`` and then the chain of edges that no
    longer lead anywhere.
    """
    tails = grid.tails
    pe = parent[b]
    w = (v | seg) & ~(1 << pe)
    x = tails[pe]
    while not is_term[x] and not w & outmask[x]:
        pe = parent[x]
        w &= ~(1 << pe)
        x = tails[pe]
    return w


def vertex_neighbors(grid: GammaGrid, v: int, outmask=None) -> set:
    """Masks of all vertices adjacent to the vertex ``v``.

    Every edge of the skeleton through ``v`` is ``v`` plus one ear: a NE
    segment leaving the tree at a point ``a`` and rejoining it at ``b``
    with no tree point in between.  The union has exactly one bounded
    region, and its other vertex drops the tree edge into ``b``.
    """
    if outmask is None:
        outmask = _out_masks(grid)
    is_term = grid._is_terminal
    heads, out_edges = grid.heads, grid.out_edges
    parent, intree = _tree_parents(grid, v)
    nb = set()
    for a in range(len(grid.points)):
        if not intree >> a & 1:
            continue
        for e in out_edges[a]:
            if v >> e & 1:
                continue
            stack = [(e, 1 << e)]
            while stack:
                e1, seg = stack.pop()
                h = heads[e1]
                if intree >> h & 1:
                    nb.add(_swap_in(grid, v, parent, seg, h, outmask, is_term))
                else:
                    for e2 in out_edges[h]:
                        stack.append((e2, seg | 1 << e2))
    return nb


def build_skeleton(grid: GammaGrid, max_vertices: int = 20_000) -> SkeletonGraph:
    verts = _vertex_masks(grid, max_vertices)
    index = {v: i for i, v in enumerate(verts)}
    outmask = _out_masks(grid)
    adj = []
    for v in verts:
        adj.append(sorted(index[w] for w in vertex_neighbors(grid, v, outmask)))
    return SkeletonGraph(grid, list(verts), adj)


def brute_force_skeleton(grid: GammaGrid) -> SkeletonGraph:
    """Quadratic pairwise test of the one-region criterion (oracle)."""
    verts = _vertex_masks(grid)
    adj = [[] for _ in verts]
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            if grid.connected_regions(verts[i] | verts[j]) == 1:
                adj[i].append(j)
                adj[j].append(i)
    return SkeletonGraph(grid, list(verts), adj)


# --- diameter -------------------------------------------------------------


def eccentricities(g: SkeletonGraph, compiled=None) -> list:
    """Eccentricity of every vertex; raises if the graph is disconnected."""
    V = g.num_vertices
    if compiled is None:
        compiled = V > 200
    if compiled:
        from . import _kernels

        indptr, indices = g.csr()
        ecc = _kernels.eccentricities(indptr, indices)
        if ecc is None:
            raise DisconnectedSkeleton(f"skeleton of {g.grid.mv} is disconnected")
        return [int(x) for x in ecc]
    out = []
    for i in range(V):
        dist = g.distances_from(i)
        if min(dist) < 0:
            raise DisconnectedSkeleton(f"skeleton of {g.grid.mv} is disconnected")
        out.append(max(dist))
    return out


def bfs_diameter(g: SkeletonGraph, compiled=None) -> int:
    if g.num_vertices == 0:
        raise DisconnectedSkeleton("empty graph")
    return max(eccentricities(g, compiled))


# --- zigzag vertices ------------------------------------------------------


def _zigzag_path(grid: GammaGrid, j: int, horizontal_first: bool) -> list:
    """Points of the zigzag path from ``t_j`` back to the origin.

    Walk away from ``t_j`` (left first for ``h_j``, down first for
    ``v_j``), stopping at the nearest column (row) that carries a terminal
    or virtual terminal vertex, then turn; once an axis is hit, run along
    it to the origin.
    """
    marks = list(grid.terminals) + list(grid.virtual_terminals)
    cols = sorted({p[0] for p in marks})
    rows = sorted({p[1] for p in marks})
    x, y = grid.terminals[j]
    pts = [(x, y)]
    go_left = horizontal_first
    while x > 0 and y > 0:
        if go_left:
            nx = max(c for c in cols if c < x)
            pts.extend((c, y) for c in range(x - 1, nx - 1, -1))
            x = nx
        else:
            ny = max(r for r in rows if r < y)
            pts.extend((x, r) for r in range(y - 1, ny - 1, -1))
            y = ny
        go_left = not go_left
    pts.extend((c, 0) for c in range(x - 1, -1, -1))
    pts.extend((0, r) for r in range(y - 1, -1, -1))
    return pts


def _path_mask(grid: GammaGrid, pts) -> int:
    mask = 0
    for a, b in zip(pts, pts[1:]):
        mask |= 1 << grid.edge_id(a, b)
    return mask


def zigzag_vertices(grid: GammaGrid):
    """The pair ``(z_h, z_v)`` built from horizontal and vertical zigzags."""
    if grid.m < 2:
        raise ValueError("zigzag vertices need at least two distinct parts")
    out = []
    for horizontal in (True, False):
        mask = axis_mask(grid)
        for j in range(1, grid.m):
            mask |= _path_mask(grid, _zigzag_path(grid, j, horizontal))
        if not grid.is_valid(mask) or grid.connected_regions(mask) != 0:
            raise ConnectError(f"zigzag diagram for {grid.mv} is not a vertex")
        out.append(LadderDiagram(grid, mask))
    return tuple(out)


# --- explicit connecting walk ----------------------------------------------


def _path_points(grid: GammaGrid, parent: dict, target: int) -> set:
    pts = {target}
    x = target
    while x != grid.origin:
        x = grid.tails[parent[x]]
        pts.add(x)
    return pts


def _crossing(grid: GammaGrid, mask: int, low: bool) -> int:
    """Highest row where the tree crosses from column 0 to 1 (``low``), or
    the farthest column where it climbs from row 0 to 1."""
    n = grid.n
    best = -1
    for k in range(n):
        a, b = ((0, k), (1, k)) if low else ((k, 0), (k, 1))
        if grid.has_edge(a, b) and mask >> grid.edge_id(a, b) & 1:
            best = k
    return best


def _align_end(grid: GammaGrid, v: int, w: int, low: bool):
    """One move making the path to ``t_1`` (or ``t_{m-1}``) agree.

    The side whose path crosses lower picks up the other side's crossing
    edge; that edge is an ear (both ends already on its tree), so the move
    is an edge of the skeleton.  Returns ``(v', w')``.
    """
    rv, rw = _crossing(grid, v, low), _crossing(grid, w, low)
    if rv == rw:
        return v, w
    lo_is_v = rv < rw
    mover = v if lo_is_v else w
    r = max(rv, rw)
    a, b = ((0, r), (1, r)) if low else ((r, 0), (r, 1))
    parent, _ = _tree_parents(grid, mover)
    moved = _swap_in(grid, mover, parent, 1 << grid.edge_id(a, b), grid.point_index[b],
                     _out_masks(grid), grid._is_terminal)
    return (moved, w) if lo_is_v else (v, moved)


def _canonical_walk(grid: GammaGrid, v: int) -> list:
    """Moves rerouting each free path ``p_i`` to leave ``t_i`` horizontally
    and merge with the base path (``p_1`` if ``a_1 = 1``, else the y-axis)."""
    mv = grid.mv
    n, m, s = mv.n, mv.m, mv.prefix_sums
    lo = 2 if mv.mults[0] == 1 else 1
    hi = m - 2 if mv.mults[-1] == 1 else m - 1
    outmask = _out_masks(grid)
    walk = [v]
    cur = v
    for i in range(lo, hi + 1):
        h = n - s[i]
        parent, intree = _tree_parents(grid, cur)
        if lo == 2:
            base = _path_points(grid, parent, grid.terminal_ids[1])
        else:
            base = {grid.point_index[(0, y)] for y in range(n + 1)}
        x = s[i]
        while True:
            p = grid.point_index[(x, h)]
            pe = parent[p]
            if grid.tails[pe] == grid.point_index.get((x - 1, h)):
                x -= 1
            else:
                break
        b = grid.point_index[(x, h)]
        if b in base:
            continue
        q = x - 1
        while not intree >> grid.point_index[(q, h)] & 1:
            q -= 1
        seg = _path_mask(grid, [(c, h) for c in range(q, x + 1)])
        cur = _swap_in(grid, cur, parent, seg, b, outmask, grid._is_terminal)
        walk.append(cur)
    return walk


def connect(v: LadderDiagram, w: LadderDiagram) -> list:
    """A walk of skeleton edges from ``v`` to ``w``.

    Phase 1 aligns the paths to ``t_1`` and ``t_{m-1}`` when ``a_1 = 1``
    or ``a_m = 1`` (one move each, on one side); phase 2 brings both ends
    to a common canonical vertex one path at a time.  Every step is
    checked with the one-region criterion.
    """
    if v.grid.mv != w.grid.mv:
        raise GridMismatch(f"vertices of different grids {v.grid.mv} and {w.grid.mv}")
    grid = v.grid
    if grid.m < 2:
        raise ValueError("connect needs at least two distinct parts")
    if v.mask == w.mask:
        return [v]
    for x in (v, w):
        if not grid.is_valid(x.mask) or grid.connected_regions(x.mask) != 0:
            raise ValueError(f"{x} is not a vertex")
    a, b = v.mask, w.mask
    head_v, head_w = [a], [b]
    if grid.mv.mults[0] == 1:
        a2, b2 = _align_end(grid, a, b, low=True)
        if a2 != a:
            head_v.append(a2)
        if b2 != b:
            head_w.append(b2)
        a, b = a2, b2
    if grid.mv.mults[-1] == 1:
        a2, b2 = _align_end(grid, a, b, low=False)
        if a2 != a:
            head_v.append(a2)
        if b2 != b:
            head_w.append(b2)
        a, b = a2, b2
    walk_v = head_v + _canonical_walk(grid, a)[1:]
    walk_w = head_w + _canonical_walk(grid, b)[1:]
    if walk_v[-1] != walk_w[-1]:
        raise ConnectError(f"canonical targets differ for {grid.mv}")
    seq = walk_v + walk_w[::-1][1:]
    out = [seq[0]]
    for x in seq[1:]:
        if x != out[-1]:
            out.append(x)
    for p, q in zip(out, out[1:]):
        if grid.connected_regions(p | q) != 1:
            raise ConnectError(f"step {p:#x} -> {q:#x} is not a skeleton edge")
    return [LadderDiagram(grid, x) for x in out]


def connect_bound(mv) -> int:
    """Length bound for :func:`connect`; 1 for the segment ``(1,1)``."""
    return max(diameter_formula(mv), 1) if mv.m >= 2 else 0


# --- reports ----------------------------------------------------------------


def skeleton_report(g: SkeletonGraph) -> dict:
    zh, zv = zigzag_vertices(g.grid) if g.grid.m >= 2 else (None, None)
    return {
        "mv": list(g.grid.mv.mults),
        "vertices": g.num_vertices,
        "edges": g.num_edges,
        "diameter_bfs": bfs_diameter(g),
        "diameter_formula": diameter_formula(g.grid.mv),
        "witness_pair": None if zh is None else {
            "z_h": g.grid.ids_of(zh.mask),
            "z_v": g.grid.ids_of(zv.mask),
            "distance": g.distance(zh, zv),
        },
    }


def skeleton_dot(g: SkeletonGraph) -> str:
    lines = [f'graph skeleton {{', f'  label="skeleton {g.grid.mv}";', "  node [shape=circle, width=0.2, label=\"\"];"]
    for i in range(g.num_vertices):
        lines.append(f"  v{i};")
    for i, j in g.edges():
        lines.append(f"  v{i} -- v{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"

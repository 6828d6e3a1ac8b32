"""The staircase grid Gamma_lambda and the classification of its edges.

Coordinates: ``x`` counts East steps, ``y`` counts North steps, the origin is
the bottom-left corner.  Terminal ``t_j`` sits at ``(s_j, n - s_j)`` on the
main diagonal.

Edge sets of sub-diagrams are plain ``int`` bitmasks over the canonical edge
order of the grid; the helpers here (``prune``, ``reaches_terminals``,
``regions``) are the hot loops of the whole package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .partition import MultiplicityVector

Point = tuple[int, int]
Edge = tuple[Point, Point]

H, V = "h", "v"


def orientation(edge: Edge) -> str:
    (x0, y0), (x1, y1) = edge
    return H if y0 == y1 else V


def transpose_point(p: Point) -> Point:
    return (p[1], p[0])


def transpose_edge(edge: Edge) -> Edge:
    a, b = edge
    return (transpose_point(a), transpose_point(b))


@dataclass(eq=False)
class GammaGrid:
    mv: MultiplicityVector
    points: list
    edges: list
    terminals: list
    virtual_terminals: list
    removable: list = field(default_factory=list)

    def __post_init__(self):
        self.point_index = {p: i for i, p in enumerate(self.points)}
        self.edge_index = {e: i for i, e in enumerate(self.edges)}
        self.tails = [self.point_index[e[0]] for e in self.edges]
        self.heads = [self.point_index[e[1]] for e in self.edges]
        self.origin = self.point_index[(0, 0)]
        self.terminal_ids = [self.point_index[t] for t in self.terminals]
        self.full = (1 << len(self.edges)) - 1
        self.out_edges = [[] for _ in self.points]
        self.in_edges = [[] for _ in self.points]
        for i, (t, h) in enumerate(zip(self.tails, self.heads)):
            self.out_edges[t].append(i)
            self.in_edges[h].append(i)
        # canonical order is by tail rank x + y; heads are then ordered too
        # since every edge advances x + y by exactly one
        self._fwd = list(range(len(self.edges)))
        self._bwd = self._fwd[::-1]
        self._edge_bits = [1 << i for i in range(len(self.edges))]
        self._is_terminal = [False] * len(self.points)
        for t in self.terminal_ids:
            self._is_terminal[t] = True
        if not self.removable:
            self.removable = [i for i in range(len(self.edges)) if self.is_valid(self.full & ~(1 << i))]
        self.facet_of_edge = {e: k for k, e in enumerate(self.removable)}
        self.removable_mask = 0
        for e in self.removable:
            self.removable_mask |= 1 << e

    # --- basic facts -----------------------------------------------------

    @property
    def n(self) -> int:
        return self.mv.n

    @property
    def m(self) -> int:
        return self.mv.m

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_facets(self) -> int:
        return len(self.removable)

    def edge_id(self, a: Point, b: Point) -> int:
        if a > b:
            a, b = b, a
        return self.edge_index[(a, b)]

    def has_edge(self, a: Point, b: Point) -> bool:
        if a > b:
            a, b = b, a
        return (a, b) in self.edge_index

    def mask_of(self, edges) -> int:
        mask = 0
        for e in edges:
            mask |= 1 << (e if isinstance(e, int) else self.edge_id(*e))
        return mask

    def edges_of(self, mask: int) -> list:
        return [self.edges[i] for i in range(len(self.edges)) if mask >> i & 1]

    def ids_of(self, mask: int) -> list:
        return [i for i in range(len(self.edges)) if mask >> i & 1]

    # --- ladder conditions ----------------------------------------------

    def _forward(self, mask: int) -> list:
        reach = [False] * len(self.points)
        reach[self.origin] = True
        tails, heads, bits = self.tails, self.heads, self._edge_bits
        for i in self._fwd:
            if mask & bits[i] and reach[tails[i]]:
                reach[heads[i]] = True
        return reach

    def _backward(self, mask: int) -> list:
        co = list(self._is_terminal)
        tails, heads, bits = self.tails, self.heads, self._edge_bits
        for i in self._bwd:
            if mask & bits[i] and co[heads[i]]:
                co[tails[i]] = True
        return co

    def reaches_terminals(self, mask: int) -> bool:
        reach = self._forward(mask)
        return all(reach[t] for t in self.terminal_ids)

    def prune(self, mask: int) -> int:
        """Largest ladder diagram inside ``mask``, or ``-1`` if none exists.

        Keeps exactly the edges lying on an origin-to-terminal NE path within
        ``mask``; that set already satisfies both ladder conditions when the
        origin reaches every terminal, and no valid sub-diagram exists
        otherwise.
        """
        reach = self._forward(mask)
        for t in self.terminal_ids:
            if not reach[t]:
                return -1
        co = self._backward(mask)
        tails, heads, bits = self.tails, self.heads, self._edge_bits
        out = 0
        for i in self._fwd:
            if mask & bits[i] and reach[tails[i]] and co[heads[i]]:
                out |= bits[i]
        return out

    def is_valid(self, mask: int) -> bool:
        if mask < 0 or mask & ~self.full:
            return False
        return self.prune(mask) == mask

    def regions(self, mask: int) -> int:
        """Bounded faces of the planar drawing of ``mask``.

        Euler's formula ``E - V + C`` summed over components.
        """
        parent = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        n_edges = 0
        for i in range(len(self.edges)):
            if mask >> i & 1:
                n_edges += 1
                a, b = self.tails[i], self.heads[i]
                parent.setdefault(a, a)
                parent.setdefault(b, b)
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[ra] = rb
        comps = sum(1 for x in parent if find(x) == x)
        return n_edges - len(parent) + comps

    def connected_regions(self, mask: int) -> int:
        """``regions`` for a diagram known to be connected (any valid one)."""
        verts = set()
        n_edges = 0
        for i in range(len(self.edges)):
            if mask >> i & 1:
                n_edges += 1
                verts.add(self.tails[i])
                verts.add(self.heads[i])
        if not n_edges:
            return 0
        return n_edges - len(verts) + 1

    # --- cells ------------------------------------------------------------

    def cells(self) -> list:
        """Lower-left corners of the unit cells bounded by the full grid."""
        pts = set(self.points)
        return sorted(
            (x, y)
            for (x, y) in pts
            if (x + 1, y + 1) in pts and self.has_edge((x, y), (x + 1, y)) and self.has_edge((x, y), (x, y + 1))
            and self.has_edge((x + 1, y), (x + 1, y + 1)) and self.has_edge((x, y + 1), (x + 1, y + 1))
        )

    def __repr__(self):
        return f"GammaGrid(mv={self.mv}, points={len(self.points)}, edges={len(self.edges)}, facets={len(self.removable)})"


def _in_grid(mv: MultiplicityVector, x: int, y: int) -> bool:
    n = mv.n
    return x >= 0 and y >= 0 and any(x <= s and y <= n - s for s in mv.prefix_sums)


def _edge_key(e: Edge):
    # tail rank first so that every edge list in this order is topologically
    # sorted; the single-pass reachability sweeps depend on it
    (x, y), b = e
    return (x + y, x, 0 if b[1] == y else 1)


@lru_cache(maxsize=256)
def build_gamma(mv: MultiplicityVector) -> GammaGrid:
    """Points and edges on origin-to-terminal NE paths.

    A point ``(x, y)`` lies on such a path iff ``x <= s_j`` and
    ``y <= n - s_j`` for some ``j``; likewise for both ends of an edge.
    Grids are cached per multiplicity vector and must not be mutated.
    """
    n = mv.n
    s = mv.prefix_sums
    points = sorted(
        ((x, y) for x in range(n + 1) for y in range(n + 1) if _in_grid(mv, x, y)),
        key=lambda p: (p[0] + p[1], p[0]),
    )
    pset = set(points)
    edges = []
    for (x, y) in points:
        for q in ((x + 1, y), (x, y + 1)):
            if q in pset and any(q[0] <= sj and q[1] <= n - sj for sj in s):
                edges.append(((x, y), q))
    edges.sort(key=_edge_key)
    terminals = [(sj, n - sj) for sj in s]
    virtual = []
    if mv.mults[0] > 1:
        virtual.append((1, n - 1))
    if mv.mults[-1] > 1:
        virtual.append((n - 1, 1))
    return GammaGrid(mv=mv, points=points, edges=edges, terminals=terminals, virtual_terminals=virtual)


def classify_edges(grid: GammaGrid) -> dict:
    """Split edges into removable (interior) and forced (boundary) ones."""
    removable = [grid.edges[i] for i in grid.removable]
    rem = set(grid.removable)
    forced = [e for i, e in enumerate(grid.edges) if i not in rem]
    return {"removable": removable, "forced": forced}


def literal_interior_edges(grid: GammaGrid) -> list:
    """Edges named interior by the explicit edge-form rule.

    That rule lists the two edges at each reflex corner ``(s_j, n - s_{j+1})``
    plus every edge strictly inside the grid (both sides of the edge are
    bounded cells).  Kept only to compare against the operational rule.
    """
    mv = grid.mv
    n, s = mv.n, mv.prefix_sums
    cells = set(grid.cells())
    out = set()
    for j in range(mv.m):
        corner = (s[j], n - s[j + 1])
        for q in ((corner[0], corner[1] + 1), (corner[0] + 1, corner[1])):
            if grid.has_edge(corner, q):
                out.add((corner, q))
    for e in grid.edges:
        (x, y), _ = e
        if orientation(e) == H:
            sides = ((x, y - 1), (x, y))
        else:
            sides = ((x - 1, y), (x, y))
        if all(c in cells for c in sides):
            out.add(e)
    return sorted(out, key=_edge_key)


def transpose_grid_edges(grid: GammaGrid) -> set:
    return {tuple(sorted(transpose_edge(e))) for e in grid.edges}

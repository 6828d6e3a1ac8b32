"""Ladder diagrams as faces of the GT polytope.

A diagram is an int bitmask over the canonical edge order of its grid.  The
empty face is the mask ``-1`` (:data:`EMPTY`); it is the bottom of every
face lattice and is what :func:`meet` returns when an intersection leaves
some terminal unreachable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import groupby

from .grid import GammaGrid, build_gamma, orientation, H
from .partition import MultiplicityVector, dimension

EMPTY = -1


class BudgetExceeded(RuntimeError):
    """Refusal to enumerate past a size budget; ``estimate`` is a lower bound."""

    def __init__(self, what: str, estimate: int, budget: int):
        super().__init__(f"{what}: at least {estimate} exceeds budget {budget}")
        self.what = what
        self.estimate = estimate
        self.budget = budget


class GridMismatch(ValueError):
    pass


class LadderDiagram:
    __slots__ = ("grid", "mask")

    def __init__(self, grid: GammaGrid, mask: int):
        self.grid = grid
        self.mask = mask

    @classmethod
    def empty(cls, grid):
        return cls(grid, EMPTY)

    @classmethod
    def top(cls, grid):
        return cls(grid, grid.full)

    @classmethod
    def from_edges(cls, grid, edges):
        return cls(grid, grid.mask_of(edges))

    @property
    def is_empty(self) -> bool:
        return self.mask == EMPTY

    @property
    def edges(self) -> list:
        return [] if self.is_empty else self.grid.edges_of(self.mask)

    @property
    def dimension(self) -> int:
        return -1 if self.is_empty else self.grid.regions(self.mask)

    def is_valid(self) -> bool:
        return self.is_empty or self.grid.is_valid(self.mask)

    def _same(self, other):
        if self.grid.mv != other.grid.mv:
            raise GridMismatch(f"diagrams on different grids {self.grid.mv} and {other.grid.mv}")

    def __le__(self, other):
        return includes(self, other)

    def __or__(self, other):
        return superimpose(self, other)

    def __and__(self, other):
        return meet(self, other)

    def __eq__(self, other):
        return isinstance(other, LadderDiagram) and self.grid.mv == other.grid.mv and self.mask == other.mask

    def __hash__(self):
        return hash((self.grid.mv, self.mask))

    def __repr__(self):
        if self.is_empty:
            return f"LadderDiagram({self.grid.mv}, EMPTY)"
        return f"LadderDiagram({self.grid.mv}, dim={self.dimension}, mask={self.mask:#x})"

    def to_json(self):
        return {"mv": list(self.grid.mv.mults), "edges": None if self.is_empty else self.grid.ids_of(self.mask)}


# --- basic operations -----------------------------------------------------


def validate(grid: GammaGrid, edge_set) -> bool:
    mask = edge_set if isinstance(edge_set, int) else grid.mask_of(edge_set)
    return grid.is_valid(mask)


def bounded_regions(ld: LadderDiagram) -> int:
    return ld.dimension


def includes(ld1: LadderDiagram, ld2: LadderDiagram) -> bool:
    """``ld1 <= ld2``: subgraph test; EMPTY is below everything."""
    ld1._same(ld2)
    if ld1.is_empty:
        return True
    if ld2.is_empty:
        return False
    return ld1.mask & ~ld2.mask == 0


def superimpose(ld1: LadderDiagram, ld2: LadderDiagram) -> LadderDiagram:
    """Join: the union of two valid diagrams is valid."""
    ld1._same(ld2)
    if ld1.is_empty:
        return ld2
    if ld2.is_empty:
        return ld1
    return LadderDiagram(ld1.grid, ld1.mask | ld2.mask)


def meet(ld1: LadderDiagram, ld2: LadderDiagram) -> LadderDiagram:
    """Largest valid diagram inside the intersection, or EMPTY."""
    ld1._same(ld2)
    if ld1.is_empty or ld2.is_empty:
        return LadderDiagram.empty(ld1.grid)
    return LadderDiagram(ld1.grid, ld1.grid.prune(ld1.mask & ld2.mask))


def is_edge(v: LadderDiagram, w: LadderDiagram) -> bool:
    v._same(w)
    return v.grid.connected_regions(v.mask | w.mask) == 1


def facets_containing(grid: GammaGrid, mask: int) -> int:
    """Bitmask over facet indices of the facets that contain a face."""
    if mask == EMPTY:
        return (1 << grid.num_facets) - 1
    z = 0
    for k, e in enumerate(grid.removable):
        if not mask >> e & 1:
            z |= 1 << k
    return z


def face_from_facets(grid: GammaGrid, facet_bits: int) -> int:
    """Intersection of the facets named in ``facet_bits`` (top if none)."""
    mask = grid.full
    for k, e in enumerate(grid.removable):
        if facet_bits >> k & 1:
            mask &= ~(1 << e)
    return grid.prune(mask)


# --- vertices -------------------------------------------------------------


def axis_mask(grid: GammaGrid) -> int:
    """The forced paths to ``t_0`` and ``t_m`` along the two axes."""
    mask = 0
    for i, (a, b) in enumerate(grid.edges):
        if (a[0] == 0 and b[0] == 0) or (a[1] == 0 and b[1] == 0):
            mask |= 1 << i
    return mask


def _vertex_masks(grid: GammaGrid, limit: int | None = None) -> list:
    """All trees made of noncrossing origin-to-terminal paths.

    Paths are added for ``t_1, ..., t_{m-1}`` in turn.  A new path may
    follow edges already in the tree for a while, but once it steps off
    it must not touch any tree point again (paths do not meet after their
    first separation), which keeps the union a tree.

    With ``limit`` set, gives up with :class:`BudgetExceeded` as soon as
    more than ``limit`` vertices have been found (the reported estimate
    is then only a lower bound).
    """
    cached = getattr(grid, "_vertex_cache", None)
    if cached is not None:
        if limit is not None and len(cached) > limit:
            raise BudgetExceeded("vertex count", len(cached), limit)
        return cached
    axes = axis_mask(grid)
    on_axes = 1 << grid.origin
    for i in grid.ids_of(axes):
        on_axes |= 1 << grid.tails[i] | 1 << grid.heads[i]
    targets = grid.terminal_ids[1:-1]
    out_edges, heads = grid.out_edges, grid.heads
    out = []

    def rec(j, tree, pts):
        if j == len(targets):
            out.append(tree)
            if limit is not None and len(out) > limit:
                raise BudgetExceeded("vertex count", len(out), limit)
            return
        target = targets[j]
        stack = [(grid.origin, tree, pts, True)]
        while stack:
            p, t, v, following = stack.pop()
            if p == target:
                rec(j + 1, t, v)
                continue
            for e in out_edges[p]:
                h = heads[e]
                if following and t >> e & 1:
                    stack.append((h, t, v, True))
                elif not v >> h & 1:
                    stack.append((h, t | 1 << e, v | 1 << h, False))

    rec(0, axes, on_axes)
    out.sort()
    grid._vertex_cache = out
    return out


def vertex_masks(grid: GammaGrid) -> list:
    return list(_vertex_masks(grid))


def enumerate_vertices(grid: GammaGrid) -> list:
    return [LadderDiagram(grid, v) for v in _vertex_masks(grid)]


def count_vertices(grid: GammaGrid) -> int:
    return len(_vertex_masks(grid))


# --- face lattice ---------------------------------------------------------


@dataclass
class FaceLattice:
    grid: GammaGrid
    faces: dict  # dimension -> sorted list of masks, including -1: [EMPTY]
    covers: list  # (lower mask, upper mask)
    grading_errors: int = 0
    dim_of: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.dim_of:
            self.dim_of = {f: d for d, fs in self.faces.items() for f in fs}

    @property
    def d(self) -> int:
        return max(self.faces)

    @property
    def top(self) -> LadderDiagram:
        return LadderDiagram(self.grid, self.grid.full)

    @property
    def f_vector(self) -> tuple:
        return tuple(len(self.faces.get(k, [])) for k in range(self.d + 1))

    @property
    def vertices(self) -> list:
        return list(self.faces.get(0, []))

    def all_faces(self) -> list:
        return [f for k in sorted(self.faces) for f in self.faces[k]]

    def __len__(self):
        return sum(len(v) for v in self.faces.values())

    def is_graded(self) -> bool:
        return all(self.dim_of[b] == self.dim_of[a] + 1 for a, b in self.covers)


def _covered(grid: GammaGrid, D: int) -> list:
    """Faces covered by the nonempty face ``D``."""
    kids = set()
    for e in grid.removable:
        if D >> e & 1:
            F = grid.prune(D & ~(1 << e))
            if F >= 0:
                kids.add(F)
    return [a for a in kids if not any(b != a and a & b == a for b in kids)]


def enumerate_faces(grid: GammaGrid, max_faces: int = 200_000) -> FaceLattice:
    """Every face with its covering relation, walking down from the top.

    Raises :class:`BudgetExceeded` as soon as more than ``max_faces``
    faces have been found.
    """
    d = grid.connected_regions(grid.full)
    dim_of = {grid.full: d}
    faces = {d: [grid.full]}
    covers = []
    bad = 0
    level = [grid.full]
    k = d
    while level and k > 0:
        nxt = []
        for D in level:
            for F in _covered(grid, D):
                if F not in dim_of:
                    dim_of[F] = k - 1
                    nxt.append(F)
                    if len(dim_of) > max_faces:
                        raise BudgetExceeded("face count", len(dim_of), max_faces)
                elif dim_of[F] != k - 1:
                    bad += 1
                covers.append((F, D))
        nxt.sort()
        faces[k - 1] = nxt
        level = nxt
        k -= 1
    faces.setdefault(0, [])
    for v in faces[0]:
        covers.append((EMPTY, v))
    dim_of[EMPTY] = -1
    faces[-1] = [EMPTY]
    return FaceLattice(grid=grid, faces=faces, covers=covers, grading_errors=bad, dim_of=dim_of)


def face_census(grid: GammaGrid, max_faces: int = 10**9):
    """f-vector and grading-violation count without storing covers.

    Uses the compiled sweep when the grid fits a machine word.  Returns
    ``(f_vector, grading_errors, total_nonempty_faces)``.
    """
    from . import _kernels

    d = dimension(grid.mv)
    if _kernels.fits_int64(grid):
        import numpy as np

        tails, heads, ob, tb = _kernels.grid_arrays(grid)
        rem = np.asarray(grid.removable, dtype=np.int64)
        fvec, bad, count = _kernels.face_sweep64(np.int64(grid.full), tails, heads, ob, tb, rem, d, max_faces)
        if count < 0:
            raise BudgetExceeded("face count", int(fvec.sum()), max_faces)
        return tuple(int(x) for x in fvec), int(bad), int(count)
    lat = enumerate_faces(grid, max_faces)
    return lat.f_vector, lat.grading_errors, len(lat) - 1


def euler_characteristic_ok(f_vector) -> bool:
    """``sum_{i<d} (-1)^i f_i == 1 - (-1)^d`` over proper nonempty faces."""
    d = len(f_vector) - 1
    if d < 1:
        return True
    return sum((-1) ** i * f_vector[i] for i in range(d)) == 1 - (-1) ** d


# --- GT points ------------------------------------------------------------


class GTPointError(ValueError):
    pass


@dataclass(frozen=True)
class GTPoint:
    """Triangular array ``x[i, j]`` for ``1 <= j <= i <= n``.

    ``rows[i-1]`` holds ``x_{i,1} .. x_{i,i}``; the diagonal is the
    partition.  Rows and columns must be weakly increasing.
    """

    rows: tuple

    @classmethod
    def from_rows(cls, rows):
        return cls(tuple(tuple(Fraction(v) for v in r) for r in rows))

    @property
    def n(self) -> int:
        return len(self.rows)

    def x(self, i: int, j: int):
        return self.rows[i - 1][j - 1]

    @property
    def diagonal(self) -> tuple:
        return tuple(self.rows[i][i] for i in range(self.n))

    def check(self):
        """Raise :class:`GTPointError` naming the first violated inequality."""
        for i, r in enumerate(self.rows, 1):
            if len(r) != i:
                raise GTPointError(f"row {i} has {len(r)} entries, expected {i}")
        for i in range(1, self.n + 1):
            for j in range(1, i):
                if i - 1 >= j and self.x(i - 1, j) > self.x(i, j):
                    raise GTPointError(
                        f"x_{{{i - 1},{j}}} <= x_{{{i},{j}}} violated ({self.x(i - 1, j)} > {self.x(i, j)})"
                    )
                if self.x(i, j) > self.x(i, j + 1):
                    name = f"lambda_{i}" if j + 1 == i else f"x_{{{i},{j + 1}}}"
                    raise GTPointError(f"x_{{{i},{j}}} <= {name} violated ({self.x(i, j)} > {self.x(i, j + 1)})")

    def multiplicities(self) -> MultiplicityVector:
        return MultiplicityVector(tuple(len(list(g)) for _, g in groupby(self.diagonal)))


def cell_label(grid: GammaGrid, c: int, r: int):
    """Which array entry the unit cell with lower-left corner ``(c, r)`` holds.

    Cells of the staircase hold free entries ``('x', i, j)``; cells in a
    shaded triangular block hold the constant of that block ``('lam', k)``;
    everything else is ``('out',)``.
    """
    n = grid.n
    if c < 0 or r < 0 or c + r > n - 1:
        return ("out",)
    i, j = n - r, c + 1
    bi, bj = block_of(grid.mv, i), block_of(grid.mv, j)
    if bi == bj:
        return ("lam", bi)
    return ("x", i, j)


def block_of(mv: MultiplicityVector, i: int) -> int:
    """1-based run index containing position ``i`` of the partition."""
    for k, s in enumerate(mv.prefix_sums[1:], 1):
        if i <= s:
            return k
    raise IndexError(i)


def edge_sides(grid: GammaGrid, e: int):
    """The two cells an edge separates: (below, above) or (left, right)."""
    (x, y), _ = grid.edges[e]
    if orientation(grid.edges[e]) == H:
        return (x, y - 1), (x, y)
    return (x - 1, y), (x, y)


def facet_labels(grid: GammaGrid) -> list:
    """Per facet, the unordered pair of entries whose equality defines it."""
    out = []
    for e in grid.removable:
        a, b = edge_sides(grid, e)
        out.append(frozenset((cell_label(grid, *a), cell_label(grid, *b))))
    return out


def _cell_value(grid, p: GTPoint, cell):
    lab = cell_label(grid, *cell)
    if lab[0] == "out":
        return None
    c, r = cell
    return p.x(grid.n - r, c + 1)


def point_to_ladder(grid: GammaGrid, p: GTPoint) -> LadderDiagram:
    """Minimal face containing ``p``.

    Draw the boundaries between adjacent groups of equal entries: a grid
    edge is kept iff the two cells it separates hold different values or
    one of them lies outside the array.
    """
    if p.n != grid.n:
        raise GTPointError(f"point has n={p.n}, grid has n={grid.n}")
    p.check()
    if p.multiplicities() != grid.mv:
        raise GTPointError(f"diagonal {p.diagonal} does not have multiplicities {grid.mv}")
    mask = 0
    for e in range(grid.num_edges):
        a, b = edge_sides(grid, e)
        va, vb = _cell_value(grid, p, a), _cell_value(grid, p, b)
        if va is None or vb is None or va != vb:
            mask |= 1 << e
    return LadderDiagram(grid, mask)


def satisfies_face(grid: GammaGrid, p: GTPoint, mask: int) -> bool:
    """Does ``p`` satisfy the defining equality of every facet containing the face?"""
    for e in grid.removable:
        if not mask >> e & 1:
            a, b = edge_sides(grid, e)
            if _cell_value(grid, p, a) != _cell_value(grid, p, b):
                return False
    return True


def random_gt_point(mv: MultiplicityVector, rng, spread: int = 3, generic: bool = False) -> GTPoint:
    """A random point of the polytope with ``lambda = spread * (1^a_1, 2^a_2, ...)``.

    Entries are filled row by row, each drawn between its upper and left
    neighbours and the row's diagonal entry, so every partial fill extends.
    Integer draws produce many ties (low-dimensional minimal faces);
    ``generic`` draws rationals strictly between the bounds instead.
    """
    lam = [spread * v for v in mv.as_partition().parts]
    n = mv.n
    rows = [[Fraction(lam[0])]]
    for i in range(2, n + 1):
        row = []
        for j in range(1, i):
            lo = max(rows[i - 2][j - 1], row[-1] if row else rows[i - 2][j - 1])
            hi = Fraction(lam[i - 1])
            if generic and lo < hi:
                t = Fraction(rng.randint(1, 999), 1000)
                row.append(lo + (hi - lo) * t)
            else:
                row.append(Fraction(rng.randint(int(lo), int(hi))) if lo.denominator == 1 else lo)
        row.append(Fraction(lam[i - 1]))
        rows.append(row)
    return GTPoint(tuple(tuple(r) for r in rows))


def grid_for(mv) -> GammaGrid:
    if not isinstance(mv, MultiplicityVector):
        mv = MultiplicityVector.of(mv)
    return build_gamma(mv)

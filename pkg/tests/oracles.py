"""Slow, independent reference implementations used by the tests.

Nothing here shares code with the package beyond reading ``grid.edges``,
``grid.points`` and ``grid.terminals``.
"""

from itertools import combinations

import networkx as nx


def to_digraph(grid, mask):
    g = nx.DiGraph()
    g.add_nodes_from(grid.points)
    for i, (a, b) in enumerate(grid.edges):
        if mask >> i & 1:
            g.add_edge(a, b)
    return g


def is_ladder(grid, mask):
    """Both ladder conditions, checked with networkx reachability."""
    g = to_digraph(grid, mask)
    origin = (0, 0)
    reach = nx.descendants(g, origin) | {origin}
    if any(t not in reach for t in grid.terminals):
        return False
    for a, b in g.edges:
        if a not in reach:
            return False
        if not any(t == b or nx.has_path(g, b, t) for t in grid.terminals):
            return False
    return True


def regions(grid, mask):
    """Bounded faces of the planar drawing = size of a cycle basis."""
    g = nx.Graph()
    for i, (a, b) in enumerate(grid.edges):
        if mask >> i & 1:
            g.add_edge(a, b)
    return len(nx.cycle_basis(g))


def all_faces(grid):
    """Every valid sub-diagram, by exhaustive search over edge subsets.

    Axis edges are in every diagram, so only the other edges are varied.
    Feasible up to about 20 free edges.
    """
    axis = 0
    for i, (a, b) in enumerate(grid.edges):
        if a[0] == b[0] == 0 or a[1] == b[1] == 0:
            axis |= 1 << i
    free = [i for i in range(len(grid.edges)) if not axis >> i & 1]
    out = []
    for bits in range(1 << len(free)):
        mask = axis
        for k, e in enumerate(free):
            if bits >> k & 1:
                mask |= 1 << e
        if is_ladder(grid, mask):
            out.append(mask)
    return out


def f_vector(grid):
    faces = all_faces(grid)
    d = max(regions(grid, f) for f in faces)
    fv = [0] * (d + 1)
    for f in faces:
        fv[regions(grid, f)] += 1
    return tuple(fv)


def vertices(grid):
    return sorted(f for f in all_faces(grid) if regions(grid, f) == 0)


def removable(grid):
    full = (1 << len(grid.edges)) - 1
    return [i for i in range(len(grid.edges)) if is_ladder(grid, full & ~(1 << i))]


def skeleton_graph(grid, verts):
    g = nx.Graph()
    g.add_nodes_from(range(len(verts)))
    for i, j in combinations(range(len(verts)), 2):
        if regions(grid, verts[i] | verts[j]) == 1:
            g.add_edge(i, j)
    return g

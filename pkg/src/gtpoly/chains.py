"""Facet dependency, facet chains, the chain adjacency tree and the boundary
sequence of chains used to pin down automorphisms.

Facets are indexed as in the grid (``grid.removable``); ``e(F)`` is the
removable edge of facet ``F``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .grid import GammaGrid
from .ladder import _vertex_masks
from .partition import dimension, is_reverse_symmetric


class ChainError(RuntimeError):
    pass


def _meet_dim(grid: GammaGrid, facets) -> int:
    mask = grid.full
    for f in facets:
        mask &= ~(1 << grid.removable[f])
    mask = grid.prune(mask)
    return -1 if mask < 0 else grid.connected_regions(mask)


def dependent(grid: GammaGrid, f1: int, f2: int) -> bool:
    """Do two facets meet in a face of dimension ``d - 3``?"""
    if f1 == f2:
        raise ValueError("dependency needs two distinct facets")
    d = dimension(grid.mv)
    return d >= 3 and _meet_dim(grid, (f1, f2)) == d - 3


def dependency_graph(grid: GammaGrid) -> dict:
    cached = getattr(grid, "_dep", None)
    if cached is not None:
        return cached
    F = grid.num_facets
    adj = {f: set() for f in range(F)}
    for a, b in combinations(range(F), 2):
        if dependent(grid, a, b):
            adj[a].add(b)
            adj[b].add(a)
    grid._dep = adj
    return adj


def _mid(grid, f):
    (x0, y0), (x1, y1) = grid.edges[grid.removable[f]]
    return ((x0 + x1) / 2, (y0 + y1) / 2)


@dataclass
class FacetChain:
    facets: tuple
    kind: str = "other"  # C0, A, B, D1, D2, length1, long, other
    index: int | None = None  # k for A (C_{2k-1}) and B (C_{2k})

    @property
    def length(self) -> int:
        return len(self.facets)

    @property
    def name(self) -> str:
        if self.kind == "A":
            return f"C{2 * self.index - 1}"
        if self.kind == "B":
            return f"C{2 * self.index}"
        return self.kind

    def as_set(self) -> frozenset:
        return frozenset(self.facets)


def _order_path(grid, comp, adj):
    """Order a path-shaped component so the first edge has the smaller x."""
    comp = set(comp)
    if len(comp) == 1:
        return tuple(comp)
    ends = [f for f in comp if len(adj[f] & comp) == 1]
    if len(ends) != 2 or any(len(adj[f] & comp) > 2 for f in comp):
        raise ChainError(f"dependency component {sorted(comp)} of {grid.mv} is not a path")
    start = min(ends, key=lambda f: (_mid(grid, f)[0], -_mid(grid, f)[1]))
    out = [start]
    prev = None
    while len(out) < len(comp):
        nxt = [g for g in adj[out[-1]] & comp if g != prev]
        prev = out[-1]
        out.append(nxt[0])
    return tuple(out)


def _corner_pair(grid, p):
    """Facets of the two edges leaving point ``p`` (up and right), if both are facets."""
    x, y = p
    try:
        up = grid.facet_of_edge[grid.edge_id((x, y), (x, y + 1))]
        right = grid.facet_of_edge[grid.edge_id((x, y), (x + 1, y))]
    except KeyError:
        return None
    return frozenset((up, right))


def partition_chains(grid: GammaGrid) -> list:
    """Connected components of the dependency relation, classified by position."""
    cached = getattr(grid, "_chains", None)
    if cached is not None:
        return cached
    adj = dependency_graph(grid)
    seen = set()
    chains = []
    for f in range(grid.num_facets):
        if f in seen:
            continue
        comp, stack = set(), [f]
        while stack:
            g = stack.pop()
            if g in comp:
                continue
            comp.add(g)
            stack.extend(adj[g] - comp)
        seen |= comp
        chains.append(FacetChain(_order_path(grid, comp, adj)))
    chains.sort(key=lambda c: (_mid(grid, c.facets[0])[0], -_mid(grid, c.facets[0])[1], c.facets))
    _classify(grid, chains)
    grid._chains = chains
    return chains


def _classify(grid, chains):
    mv = grid.mv
    n, s, m = mv.n, mv.prefix_sums, mv.m
    corner = None
    if grid.has_edge((1, 0), (1, 1)) and grid.has_edge((0, 1), (1, 1)):
        e1, e2 = grid.edge_id((1, 0), (1, 1)), grid.edge_id((0, 1), (1, 1))
        if e1 in grid.facet_of_edge and e2 in grid.facet_of_edge:
            corner = frozenset((grid.facet_of_edge[e1], grid.facet_of_edge[e2]))
    type_a = {}
    for k in range(2, m):
        pair = _corner_pair(grid, (s[k - 1], n - s[k]))
        if pair:
            type_a[pair] = k
    type_b = {}
    for k in range(1, m):
        if mv.a(k) >= 2 and mv.a(k + 1) >= 2:
            pair = _corner_pair(grid, (s[k] - 1, n - s[k] - 1))
            if pair:
                type_b[pair] = k
    left, right = [], []
    for c in chains:
        key = c.as_set()
        if c.length == 2 and key == corner:
            c.kind = "C0"
        elif c.length == 2 and key in type_a:
            c.kind, c.index = "A", type_a[key]
        elif c.length == 2 and key in type_b:
            c.kind, c.index = "B", type_b[key]
        elif c.length == 1:
            x, y = _mid(grid, c.facets[0])
            if m >= 2 and x < s[1]:
                left.append(c)
            elif m >= 2 and y < n - s[m - 1]:
                right.append(c)
            c.kind = "length1" if (x < s[1] or y < n - s[m - 1]) else "other"
        elif c.length > 2:
            c.kind = "long"
    if left:
        min(left, key=lambda c: _mid(grid, c.facets[0])[1]).kind = "D1"
    if right:
        min(right, key=lambda c: _mid(grid, c.facets[0])[0]).kind = "D2"


def length_one_sets(grid: GammaGrid):
    """The length-1 chains left of ``t_1`` and right of ``t_{m-1}``."""
    mv = grid.mv
    n, s, m = mv.n, mv.prefix_sums, mv.m
    left, right = [], []
    for c in partition_chains(grid):
        if c.length == 1:
            x, y = _mid(grid, c.facets[0])
            if x < s[1]:
                left.append(c)
            elif y < n - s[m - 1]:
                right.append(c)
    return left, right


def chain_by_name(grid: GammaGrid, name: str):
    for c in partition_chains(grid):
        if c.name == name:
            return c
    return None


# --- adjacency ------------------------------------------------------------------


def _pair_meets(grid, chain):
    out = {}
    for a, b in combinations(chain.facets, 2):
        mask = grid.full & ~(1 << grid.removable[a]) & ~(1 << grid.removable[b])
        out.setdefault(grid.prune(mask), []).append(frozenset((a, b)))
    return out


def chains_adjacent(grid: GammaGrid, c1: FacetChain, c2: FacetChain) -> int:
    """Number of distinct facet quadruples with ``F1 & F2 == J1 & J2``."""
    if c1.as_set() == c2.as_set():
        raise ValueError("adjacency is between two different chains")
    m1, m2 = _pair_meets(grid, c1), _pair_meets(grid, c2)
    quads = set()
    for face, pairs in m1.items():
        if face < 0:
            continue
        for p in pairs:
            for q in m2.get(face, []):
                quads.add(p | q)
    return len(quads)


@dataclass
class ChainGraph:
    grid: GammaGrid
    nodes: list  # FacetChain, length >= 2
    edges: list  # (i, j, points)
    root: int | None = None
    children: dict = field(default_factory=dict)

    @property
    def leaves(self) -> list:
        deg = [0] * len(self.nodes)
        for i, j, _ in self.edges:
            deg[i] += 1
            deg[j] += 1
        if len(self.nodes) == 1:
            return [0]
        return [i for i, d in enumerate(deg) if d == 1]

    def is_tree(self) -> bool:
        if not self.nodes:
            return True
        if len(self.edges) != len(self.nodes) - 1:
            return False
        adj = {i: set() for i in range(len(self.nodes))}
        for i, j, _ in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        seen, stack = set(), [0]
        while stack:
            u = stack.pop()
            if u not in seen:
                seen.add(u)
                stack.extend(adj[u] - seen)
        return len(seen) == len(self.nodes)


def build_chain_graph(grid: GammaGrid, check: bool = True) -> ChainGraph:
    if grid.m < 2:
        raise ValueError("chain graph needs at least two distinct parts")
    nodes = [c for c in partition_chains(grid) if c.length >= 2]
    edges = []
    for i, j in combinations(range(len(nodes)), 2):
        k = chains_adjacent(grid, nodes[i], nodes[j])
        if k:
            edges.append((i, j, k))
    root = next((i for i, c in enumerate(nodes) if c.kind == "C0"), None)
    g = ChainGraph(grid, nodes, edges, root)
    if check and not g.is_tree():
        raise ChainError(f"chain adjacency graph of {grid.mv} is not a tree")
    # children ordered by the position of their first edge
    if root is not None and g.is_tree():
        adj = {i: [] for i in range(len(nodes))}
        for i, j, _ in edges:
            adj[i].append(j)
            adj[j].append(i)
        order = {i: (_mid(grid, c.facets[0])[0], -_mid(grid, c.facets[0])[1]) for i, c in enumerate(nodes)}
        stack, parent = [root], {root: None}
        while stack:
            u = stack.pop()
            kids = sorted((w for w in adj[u] if w != parent[u]), key=order.get)
            g.children[u] = kids
            for w in kids:
                parent[w] = u
                stack.append(w)
    return g


# --- boundary sequence ------------------------------------------------------------


def _contains_all(grid, facets) -> bool:
    """Is there a vertex lying on every facet named?"""
    need = 0
    for f in facets:
        need |= 1 << grid.removable[f]
    return any(not v & need for v in _vertex_masks(grid))


def incompatible(grid: GammaGrid, c1: FacetChain, c2: FacetChain) -> bool:
    return not _contains_all(grid, c1.facets + c2.facets)


def boundary_sequence(grid: GammaGrid) -> list:
    """``[D_1, C_2, C_3, ..., C_{2m-2}, D_2]``, existing members only."""
    m = grid.m
    if m < 3:
        raise ValueError(f"boundary sequence needs m >= 3, got m = {m}")
    names = ["D1"]
    for k in range(1, m):
        if k >= 2:
            names.append(f"C{2 * k - 1}")
        names.append(f"C{2 * k}")
    names.append("D2")
    return [c for c in (chain_by_name(grid, nm) for nm in names) if c is not None]


def facet_distance(grid: GammaGrid, anchor: FacetChain, target: FacetChain, exclude, limit: int = 6):
    """Smallest set of outside facets whose intersection with the facet of
    ``anchor`` and one facet of ``target`` has no vertex.

    ``exclude`` lists chains whose facets may not be used.  Returns ``None``
    if no set of size at most ``limit`` works.
    """
    banned = set(anchor.facets) | set(target.facets)
    for c in exclude:
        banned |= set(c.facets)
    pool = [f for f in range(grid.num_facets) if f not in banned]
    verts = _vertex_masks(grid)
    best = None
    for f in target.facets:
        base = 1 << grid.removable[anchor.facets[0]] | 1 << grid.removable[f]
        cand = [v for v in verts if not v & base]
        for size in range(0, limit + 1):
            if best is not None and size >= best:
                break
            hit = False
            for S in combinations(pool, size):
                need = 0
                for g in S:
                    need |= 1 << grid.removable[g]
                if not any(not v & need for v in cand):
                    hit = True
                    break
            if hit:
                best = size if best is None else min(best, size)
                break
    return best


def boundary_report(grid: GammaGrid) -> dict:
    seq = boundary_sequence(grid)
    mv = grid.mv
    names = [c.name for c in seq]
    out = {
        "sequence": names,
        "consecutive_incompatible": all(incompatible(grid, a, b) for a, b in zip(seq, seq[1:])),
    }
    d1, c3 = chain_by_name(grid, "D1"), chain_by_name(grid, "C3")
    if d1 is not None and c3 is not None:
        out["distance_D1_C3"] = facet_distance(grid, d1, c3, seq)
        out["expected_D1_C3"] = mv.a(1) + mv.a(2) - 2
    d2, cl = chain_by_name(grid, "D2"), chain_by_name(grid, f"C{2 * mv.m - 3}")
    if d2 is not None and cl is not None:
        out["distance_D2_C_last"] = facet_distance(grid, d2, cl, seq)
        out["expected_D2_C_last"] = mv.a(mv.m - 1) + mv.a(mv.m) - 2
    return out


def sequence_action(grid: GammaGrid, aut) -> str:
    """'fixed', 'reversed' or 'broken' for the boundary sequence under ``aut``.

    The length-1 chains left of ``t_1`` can be permuted among themselves
    (likewise right of ``t_{m-1}``), so the slot of ``D_1`` is the whole left
    set and the slot of ``D_2`` the whole right set.
    """
    left, right = length_one_sets(grid)
    slots = []
    for c in boundary_sequence(grid):
        if c.kind == "D1":
            slots.append({x.as_set() for x in left})
        elif c.kind == "D2":
            slots.append({x.as_set() for x in right})
        else:
            slots.append({c.as_set()})
    img = [{frozenset(aut.perm[f] for f in x) for x in slot} for slot in slots]
    if img == slots:
        return "fixed"
    if img == slots[::-1]:
        return "reversed"
    return "broken"


# --- orientation lemmas ---------------------------------------------------------------


def _adjacency_counts(grid):
    cached = getattr(grid, "_chain_adj", None)
    if cached is None:
        long_chains = [c for c in partition_chains(grid) if c.length >= 2]
        cached = {}
        for a in long_chains:
            for b in long_chains:
                if a is not b:
                    cached[(a.as_set(), b.as_set())] = chains_adjacent(grid, a, b)
        grid._chain_adj = cached
    return cached


def check_orientation_lemmas(grid: GammaGrid, aut) -> dict:
    """Chain images are chains of equal length, adjacency counts are kept,
    each chain is mapped in order or in reverse, and when every chain of
    length >= 2 is fixed, all chains longer than 2 share one orientation."""
    chains = partition_chains(grid)
    by_set = {c.as_set(): c for c in chains}
    image_ok = True
    whole_ok = True
    flips = {}
    mapping = {}
    for c in chains:
        img_seq = tuple(aut.perm[f] for f in c.facets)
        target = by_set.get(frozenset(img_seq))
        if target is None or target.length != c.length:
            image_ok = False
            continue
        mapping[c.as_set()] = target
        if img_seq == target.facets:
            flips[c.as_set()] = False
        elif img_seq == target.facets[::-1]:
            flips[c.as_set()] = c.length > 1
        else:
            whole_ok = False
    adj_ok = image_ok
    if image_ok:
        counts = _adjacency_counts(grid)
        for (a, b), k in counts.items():
            if counts[(mapping[a].as_set(), mapping[b].as_set())] != k:
                adj_ok = False
                break
    common = None
    if image_ok and all(mapping[c.as_set()].as_set() == c.as_set() for c in chains if c.length >= 2):
        orient = {flips[c.as_set()] for c in chains if c.length > 2}
        common = len(orient) <= 1
    return {
        "chain_images": image_ok,
        "adjacency_preserved": adj_ok,
        "whole_orientation": whole_ok,
        "common_orientation": common,
        "passed": image_ok and adj_ok and whole_ok and common is not False,
    }


# --- reports -----------------------------------------------------------------------------


def chain_report(grid: GammaGrid) -> dict:
    chains = partition_chains(grid)
    rep = {
        "mv": list(grid.mv.mults),
        "chains": [
            {"facets": list(c.facets), "edges": [_edge_str(grid, f) for f in c.facets], "length": c.length, "class": c.name}
            for c in chains
        ],
    }
    if grid.m >= 2:
        cg = build_chain_graph(grid, check=False)
        rep["tree_edges"] = [[i, j, k] for i, j, k in cg.edges]
        rep["tree_nodes"] = [cg.nodes[i].name if cg.nodes[i].kind != "long" else f"long{i}" for i in range(len(cg.nodes))]
        rep["is_tree"] = cg.is_tree()
    if grid.m >= 3:
        rep["boundary_sequence"] = boundary_report(grid)
        rep["reverse_symmetric"] = is_reverse_symmetric(grid.mv)
    return rep


def _edge_str(grid, f):
    (a, b), (c, d) = grid.edges[grid.removable[f]]
    return f"({a},{b})-({c},{d})"


def chain_graph_dot(cg: ChainGraph) -> str:
    lines = ["graph chains {", f'  label="chain adjacency {cg.grid.mv}";']
    for i, c in enumerate(cg.nodes):
        label = c.name if c.kind != "long" else f"len {c.length}"
        shape = "doublecircle" if i == cg.root else "circle"
        lines.append(f'  c{i} [label="{label}", shape={shape}];')
    for i, j, k in cg.edges:
        lines.append(f'  c{i} -- c{j} [label="{k}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"

"""Combinatorial automorphisms as permutations of facets.

An automorphism of the face lattice is pinned down by what it does to the
facets, and facets are the removable edges of the grid, so an element is a
tuple ``perm`` with ``perm[k]`` the image of facet ``k``.  The induced map
on a face ``G`` sends the set of facets containing ``G`` through ``perm``
and intersects the images.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from itertools import permutations
from math import factorial

import numpy as np

from .grid import GammaGrid, transpose_edge
from .ladder import (
    EMPTY,
    BudgetExceeded,
    FaceLattice,
    _vertex_masks,
    axis_mask,
    face_from_facets,
    facet_labels,
    facets_containing,
)
from .partition import aut_order_formula, is_reverse_symmetric


class GeneratorError(ValueError):
    """A generator's preconditions fail for the given multiplicities."""


class InvalidAutomorphism(RuntimeError):
    """A constructed map is not a lattice automorphism."""


class Automorphism:
    __slots__ = ("grid", "perm", "label")

    def __init__(self, grid: GammaGrid, perm, label: str = ""):
        self.grid = grid
        self.perm = tuple(perm)
        self.label = label

    @classmethod
    def identity(cls, grid):
        return cls(grid, range(grid.num_facets), "id")

    def __eq__(self, other):
        return isinstance(other, Automorphism) and self.perm == other.perm and self.grid.mv == other.grid.mv

    def __hash__(self):
        return hash(self.perm)

    def __repr__(self):
        return f"Automorphism({self.label or '?'}: {one_line(self.perm)})"

    def __mul__(self, other):
        """``(self * other)(F) = self(other(F))``."""
        p = self.perm
        return Automorphism(self.grid, (p[i] for i in other.perm), f"{self.label}*{other.label}")

    def inverse(self):
        inv = [0] * len(self.perm)
        for i, j in enumerate(self.perm):
            inv[j] = i
        return Automorphism(self.grid, inv, f"({self.label})^-1")

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.perm))

    def order(self) -> int:
        k, x = 1, self
        while not x.is_identity():
            x = x * self
            k += 1
        return k

    def map_facets(self, bits: int) -> int:
        out = 0
        for k, j in enumerate(self.perm):
            if bits >> k & 1:
                out |= 1 << j
        return out

    def apply(self, mask: int) -> int:
        """Image of a face (edge mask, or EMPTY)."""
        if mask == EMPTY:
            return EMPTY
        return face_from_facets(self.grid, self.map_facets(facets_containing(self.grid, mask)))


def one_line(perm) -> str:
    return "[" + " ".join(map(str, perm)) + "]"


# --- incidence data --------------------------------------------------------


def vertex_facet_sets(grid: GammaGrid) -> list:
    """``Z(v)`` for every vertex: the facets containing it, as a bitmask."""
    cached = getattr(grid, "_zsets", None)
    if cached is None:
        cached = [facets_containing(grid, v) for v in _vertex_masks(grid)]
        grid._zsets = cached
    return cached


def check_vertex_incidence(aut: Automorphism) -> bool:
    """Does the facet permutation map the vertex incidence family onto itself?

    Faces are determined by their vertex sets, so this is equivalent to
    the permutation extending to a lattice automorphism.
    """
    n = len(aut.perm)
    if sorted(aut.perm) != list(range(n)):
        return False
    zs = vertex_facet_sets(aut.grid)
    return sorted(aut.map_facets(z) for z in zs) == sorted(zs)


def check_on_lattice(aut: Automorphism, lattice: FaceLattice) -> bool:
    """Bijective on faces, grade preserving, covers onto covers."""
    image = {f: aut.apply(f) for f in lattice.dim_of}
    if set(image.values()) != set(lattice.dim_of):
        return False
    if any(lattice.dim_of[image[f]] != d for f, d in lattice.dim_of.items()):
        return False
    covers = set(lattice.covers)
    return {(image[a], image[b]) for a, b in covers} == covers


def validate(aut: Automorphism, lattice: FaceLattice | None = None):
    if not check_vertex_incidence(aut):
        raise InvalidAutomorphism(f"{aut.label} does not preserve vertex-facet incidence")
    if lattice is not None and not check_on_lattice(aut, lattice):
        raise InvalidAutomorphism(f"{aut.label} is not an automorphism of the face lattice")
    return aut


# --- generator constructors ------------------------------------------------


def _facet(grid, a, b) -> int:
    try:
        return grid.facet_of_edge[grid.edge_id(a, b)]
    except KeyError:
        raise GeneratorError(f"edge {a}-{b} is not a facet of {grid.mv}") from None


def _transposition(grid, f, g, label):
    perm = list(range(grid.num_facets))
    perm[f], perm[g] = g, f
    return Automorphism(grid, perm, label)


def gen_corner(grid: GammaGrid) -> Automorphism:
    """``mu``: exchange the edges closing the cell at the origin.

    The facet ``x_{n,1} = x_{n,2}`` (edge (1,0)-(1,1)) trades places with
    ``x_{n,1} = x_{n-1,1}`` (edge (0,1)-(1,1)); all other facets are fixed.
    """
    if grid.num_facets == 0:
        raise GeneratorError(f"{grid.mv} is a point")
    return _transposition(grid, _facet(grid, (1, 0), (1, 1)), _facet(grid, (0, 1), (1, 1)), "mu")


def gen_k_corner(grid: GammaGrid, k: int) -> Automorphism:
    """``mu_k``: the same exchange at the reflex corner below-left of ``t_k``."""
    mv = grid.mv
    if not 1 <= k <= mv.m - 1:
        raise GeneratorError(f"k={k} out of range 1..{mv.m - 1}")
    if mv.a(k) < 2 or mv.a(k + 1) < 2:
        raise GeneratorError(f"mu_{k} needs a_{k} >= 2 and a_{k + 1} >= 2, got {mv.a(k)}, {mv.a(k + 1)}")
    s, n = mv.prefix_sums[k], mv.n
    c = (s - 1, n - s - 1)
    f = _facet(grid, c, (c[0], c[1] + 1))
    g = _facet(grid, c, (c[0] + 1, c[1]))
    return _transposition(grid, f, g, f"mu_{k}")


def _symmetric_edges(grid, end):
    mv = grid.mv
    n = mv.n
    if end == "low":
        if mv.a(1) != 1 or mv.m < 2:
            raise GeneratorError(f"low-end symmetric group needs a_1 = 1, got {mv.mults}")
        return [((0, n - i), (1, n - i)) for i in range(1, mv.a(2) + 1)]
    if end == "high":
        if mv.a(mv.m) != 1 or mv.m < 2:
            raise GeneratorError(f"high-end symmetric group needs a_m = 1, got {mv.mults}")
        return [((n - i, 0), (n - i, 1)) for i in range(1, mv.a(mv.m - 1) + 1)]
    raise GeneratorError(f"end must be 'low' or 'high', got {end!r}")


def gen_symmetric(grid: GammaGrid, end: str, sigma) -> Automorphism:
    """Permute the topmost first-column crossings (``end='low'``) or the
    rightmost last-row crossings (``end='high'``).

    ``sigma`` is a 0-based one-line permutation: crossing ``i`` goes to
    crossing ``sigma[i]``, counting from the terminal side.
    """
    edges = _symmetric_edges(grid, end)
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(len(edges))):
        raise GeneratorError(f"sigma must permute 0..{len(edges) - 1}, got {sigma}")
    ids = [_facet(grid, *e) for e in edges]
    perm = list(range(grid.num_facets))
    for i, j in enumerate(sigma):
        perm[ids[i]] = ids[j]
    return Automorphism(grid, perm, f"sigma_{end}{one_line(sigma)}")


def gen_flip(grid: GammaGrid) -> Automorphism:
    """``rho``: reflect every diagram over ``y = x``."""
    if not is_reverse_symmetric(grid.mv):
        raise GeneratorError(f"{grid.mv} is not reverse symmetric")
    perm = []
    for e in grid.removable:
        a, b = transpose_edge(grid.edges[e])
        perm.append(_facet(grid, a, b))
    return Automorphism(grid, perm, "rho")


def _relabel_perm(grid, relabel, label):
    labels = facet_labels(grid)
    where = {lab: k for k, lab in enumerate(labels)}
    if len(where) != len(labels):
        raise InvalidAutomorphism(f"facet labels of {grid.mv} are not unique")
    perm = []
    for lab in labels:
        img = frozenset(relabel(x) for x in lab)
        if img not in where:
            raise GeneratorError(f"{label}: no facet with label {sorted(img)}")
        perm.append(where[img])
    return Automorphism(grid, perm, label)


def gen_rotation(grid: GammaGrid) -> Automorphism:
    """``tau`` (m = 2): rotate the ``a_1 x a_2`` rectangle by 180 degrees.

    Free entries move with their cells and the two constant blocks trade
    places, so the two corner facets are exchanged as well.
    """
    mv = grid.mv
    if mv.m != 2:
        raise GeneratorError(f"rotation needs m = 2, got m = {mv.m}")
    a1, a2 = mv.mults
    n = mv.n

    def relabel(lab):
        if lab[0] == "x":
            _, i, j = lab
            c, r = a1 - j, a2 - 1 - (n - i)
            return ("x", n - r, c + 1)
        if lab[0] == "lam":
            return ("lam", 3 - lab[1])
        return lab

    return _relabel_perm(grid, relabel, "tau")


def one_turn_vertices(grid: GammaGrid):
    """For m = 2, the vertices whose path to ``t_1`` turns exactly once."""
    if grid.m != 2:
        raise GeneratorError(f"needs m = 2, got m = {grid.m}")
    a1, a2 = grid.mv.mults
    axes = axis_mask(grid)
    up = grid.mask_of([((x, a2), (x + 1, a2)) for x in range(a1)])
    right = grid.mask_of([((a1, y), (a1, y + 1)) for y in range(a2)])
    return axes | up, axes | right


def facet_perm_from_vertex_map(grid: GammaGrid, vmap: dict, label: str) -> Automorphism:
    """Facet permutation induced by a bijection of vertices (mask -> mask).

    Each facet is identified with the set of vertices on it; the image
    set must again be the vertex set of a facet.
    """
    verts = _vertex_masks(grid)
    on = []
    for e in grid.removable:
        on.append(frozenset(v for v in verts if not v >> e & 1))
    where = {s: k for k, s in enumerate(on)}
    perm = []
    for s in on:
        img = frozenset(vmap.get(v, v) for v in s)
        if img not in where:
            raise InvalidAutomorphism(f"{label}: image of a facet is not a facet")
        perm.append(where[img])
    return Automorphism(grid, perm, label)


def gen_vertex_swap(grid: GammaGrid) -> Automorphism:
    """``alpha`` (m = 2): exchange the two one-turn vertices, fix the rest."""
    if grid.m != 2:
        raise GeneratorError(f"vertex swap needs m = 2, got m = {grid.m}")
    p1, p2 = one_turn_vertices(grid)
    return facet_perm_from_vertex_map(grid, {p1: p2, p2: p1}, "alpha")


def _closure_perms(gens) -> set:
    if not gens:
        return set()
    ident = tuple(range(len(gens[0].perm)))
    seen, todo = {ident}, [ident]
    while todo:
        x = todo.pop()
        for g in gens:
            y = tuple(g.perm[i] for i in x)
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen


def generators(grid: GammaGrid) -> list:
    """Every applicable generator, without duplicate permutations."""
    mv = grid.mv
    if grid.num_facets == 0:
        return []
    gens = [gen_corner(grid)]
    for k in range(1, mv.m):
        if mv.a(k) >= 2 and mv.a(k + 1) >= 2:
            gens.append(gen_k_corner(grid, k))
    for end, size in (("low", mv.a(2) if mv.a(1) == 1 else 0), ("high", mv.a(mv.m - 1) if mv.a(mv.m) == 1 else 0)):
        for i in range(size - 1):
            sigma = list(range(size))
            sigma[i], sigma[i + 1] = i + 1, i
            g = gen_symmetric(grid, end, sigma)
            g.label = f"s_{end}{i + 1}"
            gens.append(g)
    if mv.m == 2:
        gens.append(gen_rotation(grid))
        gens.append(gen_vertex_swap(grid))
    if is_reverse_symmetric(mv):
        rho = gen_flip(grid)
        # for a_1 = a_2 = 2 the flip is already a product of the others
        if mv.m != 2 or rho.perm not in _closure_perms(gens):
            gens.append(rho)
    out, seen = [], set()
    for g in gens:
        if g.is_identity() or g.perm in seen:
            continue
        seen.add(g.perm)
        out.append(g)
    return out


# --- groups ------------------------------------------------------------------


@dataclass
class AutGroup:
    grid: GammaGrid
    elements: list
    generators: list

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, aut):
        return aut.perm in {e.perm for e in self.elements}

    def perms(self) -> set:
        return {e.perm for e in self.elements}


def close_group(gens, grid: GammaGrid | None = None, lattice: FaceLattice | None = None,
                max_order: int = 10**6) -> AutGroup:
    """Closure of the generators under composition (BFS over words)."""
    gens = list(gens)
    if grid is None:
        if not gens:
            raise ValueError("close_group needs a grid when there are no generators")
        grid = gens[0].grid
    for g in gens:
        try:
            validate(g, lattice)
        except InvalidAutomorphism as exc:
            raise InvalidAutomorphism(f"generator {g.label} rejected: {exc}") from None
    ident = Automorphism.identity(grid)
    seen = {ident.perm: ident}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = g * x
            if y.perm not in seen:
                if y.label.endswith("*id"):
                    y.label = y.label[:-3]
                seen[y.perm] = y
                queue.append(y)
                if len(seen) > max_order:
                    raise BudgetExceeded("group order", len(seen), max_order)
    elements = sorted(seen.values(), key=lambda a: a.perm)
    return AutGroup(grid, elements, gens)


def brute_force_aut(grid: GammaGrid, lattice: FaceLattice | None = None,
                    max_vertices: int = 20_000, max_order: int = 10**6) -> AutGroup:
    """All facet permutations preserving the vertex-facet incidence family.

    Backtracking assigns facet images one at a time (facets sorted by how
    many vertices lie on them).  After each assignment the multiset of
    partial incidence patterns of the vertices, pushed through the partial
    map, must equal the multiset of the target patterns restricted to the
    assigned images; otherwise the branch dies.
    """
    verts = _vertex_masks(grid, max_vertices)
    F = grid.num_facets
    if F == 0:
        return AutGroup(grid, [Automorphism.identity(grid)], [])
    if F > 62:
        raise BudgetExceeded("facet count", F, 62)
    Z = np.array(vertex_facet_sets(grid), dtype=np.int64)
    member = [((Z >> k) & 1).astype(bool) for k in range(F)]
    deg = [int(m.sum()) for m in member]
    # signature: degree plus the sorted list of co-degrees with other facets
    sig = []
    for k in range(F):
        sig.append((deg[k], tuple(sorted(int((member[k] & member[j]).sum()) for j in range(F) if j != k))))
    order = sorted(range(F), key=lambda k: (-deg[k], k))
    found = []
    perm = [-1] * F
    used = [False] * F

    def rec(pos, img, dom_img_mask):
        if pos == F:
            a = Automorphism(grid, perm, "")
            if check_vertex_incidence(a):
                found.append(a)
                if len(found) > max_order:
                    raise BudgetExceeded("group order", len(found), max_order)
            return
        f = order[pos]
        for g in range(F):
            if used[g] or sig[g] != sig[f]:
                continue
            new_img = img | (member[f].astype(np.int64) << g)
            mask = dom_img_mask | (1 << g)
            if not np.array_equal(np.sort(new_img), np.sort(Z & np.int64(mask))):
                continue
            perm[f] = g
            used[g] = True
            rec(pos + 1, new_img, mask)
            used[g] = False
            perm[f] = -1

    rec(0, np.zeros(len(verts), np.int64), 0)
    if lattice is not None:
        for a in found:
            validate(a, lattice)
    for i, a in enumerate(sorted(found, key=lambda a: a.perm)):
        a.label = f"g{i}"
    return AutGroup(grid, sorted(found, key=lambda a: a.perm), [])


def simplex_group(grid: GammaGrid) -> int:
    """Order of the full symmetric group on the facets of a simplex."""
    return factorial(grid.num_facets)


# --- relations and reports ----------------------------------------------------


def _find(gens, name):
    for g in gens:
        if g.label == name:
            return g
    return None


def relation_checks(grid: GammaGrid) -> dict:
    """Involutions, ``mu tau = tau mu_1``, ``rho mu_k rho = mu_{m-k}``,
    ``rho mu rho = mu`` and the homomorphism property of the symmetric
    group embeddings, each reported as a boolean."""
    mv = grid.mv
    out = {}
    if grid.num_facets == 0:
        return out
    mu = gen_corner(grid)
    named = {"mu": mu}
    for k in range(1, mv.m):
        if mv.a(k) >= 2 and mv.a(k + 1) >= 2:
            named[f"mu_{k}"] = gen_k_corner(grid, k)
    if is_reverse_symmetric(mv):
        named["rho"] = gen_flip(grid)
    if mv.m == 2:
        named["tau"] = gen_rotation(grid)
        named["alpha"] = gen_vertex_swap(grid)
    for name, g in named.items():
        out[f"{name}^2=id"] = (g * g).is_identity()
    if mv.m == 2 and "mu_1" in named:
        tau = named["tau"]
        out["mu*tau=tau*mu_1"] = (mu * tau) == (tau * named["mu_1"])
        alpha = named["alpha"]
        out["alpha central"] = all(alpha * x == x * alpha for x in (mu, named["mu_1"], tau))
    if "rho" in named:
        rho = named["rho"]
        out["rho*mu*rho=mu"] = rho * mu * rho == mu
        for k in range(1, mv.m):
            if f"mu_{k}" in named:
                other = named.get(f"mu_{mv.m - k}")
                out[f"rho*mu_{k}*rho=mu_{mv.m - k}"] = other is not None and rho * named[f"mu_{k}"] * rho == other
    for end, size in (("low", mv.a(2) if mv.a(1) == 1 else 0), ("high", mv.a(mv.m - 1) if mv.a(mv.m) == 1 else 0)):
        if size >= 2 and size <= 5:
            ok = True
            perms = list(permutations(range(size)))
            embed = {p: gen_symmetric(grid, end, p) for p in perms}
            for p in perms:
                for q in perms:
                    pq = tuple(p[q[i]] for i in range(size))
                    if embed[p] * embed[q] != embed[pq]:
                        ok = False
            out[f"S_{size}({end}) homomorphism"] = ok
    return out


def structure_report(group: AutGroup, mv=None) -> dict:
    mv = mv or group.grid.mv
    orders = Counter(e.order() for e in group.elements)
    abelian = all(a * b == b * a for a in group.generators for b in group.generators)
    exponent = 1
    for k in orders:
        exponent = exponent * k // _gcd(exponent, k)
    rep = {
        "mv": list(mv.mults),
        "order": group.order,
        "formula_order": aut_order_formula(mv),
        "order_matches_formula": group.order == aut_order_formula(mv),
        "element_orders": {str(k): orders[k] for k in sorted(orders)},
        "abelian": abelian,
        "exponent": exponent,
    }
    if mv.m >= 3 and is_reverse_symmetric(mv):
        grid = group.grid
        rho = gen_flip(grid)
        conj = {"mu": rho * gen_corner(grid) * rho == gen_corner(grid)}
        for k in range(1, mv.m):
            if mv.a(k) >= 2 and mv.a(k + 1) >= 2:
                conj[f"mu_{k}->mu_{mv.m - k}"] = rho * gen_k_corner(grid, k) * rho == gen_k_corner(grid, mv.m - k)
        rep["rho_conjugation"] = conj
        rep["rho_conjugation_matches_phi"] = all(conj.values())
    return rep


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def aut_report(grid: GammaGrid, lattice: FaceLattice | None = None, oracle: bool = True,
               max_vertices: int = 20_000) -> dict:
    gens = generators(grid)
    group = close_group(gens, grid, lattice)
    rels = relation_checks(grid)
    oracle_order = None
    if oracle:
        try:
            oracle_order = brute_force_aut(grid, lattice, max_vertices=max_vertices).order
        except BudgetExceeded:
            oracle_order = None
    formula = aut_order_formula(grid.mv)
    return {
        "mv": list(grid.mv.mults),
        "order": group.order,
        "generators": [{"name": g.label, "perm": one_line(g.perm)} for g in gens],
        "relations_verified": rels,
        "formula_order": formula,
        "oracle_order": oracle_order,
        "match": group.order == formula and (oracle_order is None or oracle_order == formula) and all(rels.values()),
    }

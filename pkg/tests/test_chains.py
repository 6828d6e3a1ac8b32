import pytest

from gtpoly.autgroup import close_group, gen_flip, generators, is_reverse_symmetric
from gtpoly.chains import (
    boundary_report,
    boundary_sequence,
    build_chain_graph,
    chain_by_name,
    chain_graph_dot,
    chain_report,
    chains_adjacent,
    check_orientation_lemmas,
    dependent,
    incompatible,
    length_one_sets,
    partition_chains,
    sequence_action,
)
from gtpoly.grid import build_gamma
from gtpoly.partition import MultiplicityVector, all_mvs, dimension

import oracles


def G(*a):
    return build_gamma(MultiplicityVector.of(a))


SMALL = [mv for mv in all_mvs(4) if build_gamma(mv).num_edges - 2 * mv.n <= 16 and mv.m >= 2]


@pytest.mark.parametrize("mv", SMALL, ids=str)
def test_dependency_matches_exhaustive_meet(mv):
    g = build_gamma(mv)
    d = dimension(mv)
    faces = oracles.all_faces(g)
    full = (1 << g.num_edges) - 1
    for i in range(g.num_facets):
        for j in range(i + 1, g.num_facets):
            both = full & ~(1 << g.removable[i]) & ~(1 << g.removable[j])
            inside = [f for f in faces if f & ~both == 0]
            top = max((oracles.regions(g, f) for f in inside), default=-1)
            assert dependent(g, i, j) == (top == d - 3), (i, j)


@pytest.mark.parametrize("mv", [m for m in all_mvs(6) if m.m >= 2], ids=str)
def test_chains_partition_and_tree(mv):
    g = build_gamma(mv)
    chains = partition_chains(g)
    seen = sorted(f for c in chains for f in c.facets)
    assert seen == list(range(g.num_facets))
    # consecutive facets in a chain are dependent
    for c in chains:
        for a, b in zip(c.facets, c.facets[1:]):
            assert dependent(g, a, b)
    cg = build_chain_graph(g)
    if len(cg.nodes) > 1:
        assert cg.is_tree()
        assert set(cg.leaves) == {i for i, c in enumerate(cg.nodes) if c.length == 2}
    if g.num_facets > dimension(mv) + 1:
        assert chain_by_name(g, "C0") is not None


def test_segment_chains():
    g = G(1, 1)
    chains = partition_chains(g)
    assert [c.length for c in chains] == [1, 1]
    cg = build_chain_graph(g)
    assert cg.edges == []


def test_type_a_count():
    g = G(2, 1, 2, 3, 1)
    assert sum(c.kind == "A" for c in partition_chains(g)) == 3


def test_type_b_example():
    c2 = chain_by_name(G(2, 2), "C2")
    assert c2 is not None and c2.length == 2


def test_boundary_sequence_111():
    assert [c.name for c in boundary_sequence(G(1, 1, 1))] == ["D1", "C3", "D2"]
    with pytest.raises(ValueError):
        boundary_sequence(G(2, 2))


def test_boundary_sequence_222():
    # the end chains exist here; see the notes
    names = [c.name for c in boundary_sequence(G(2, 2, 2))]
    assert names == ["D1", "C2", "C3", "C4", "D2"]


def test_adjacency_edge_cases():
    g = G(1, 1)
    a, b = partition_chains(g)
    assert chains_adjacent(g, a, b) == 0
    g = G(2, 2)
    c = chain_by_name(g, "C0")
    with pytest.raises(ValueError):
        chains_adjacent(g, c, c)


@pytest.mark.parametrize("mv", [m for m in all_mvs(6) if m.m >= 3], ids=str)
def test_boundary_distances(mv):
    rep = boundary_report(build_gamma(mv))
    if "expected_D1_C3" in rep:
        assert rep["distance_D1_C3"] == rep["expected_D1_C3"]
    if "expected_D2_C_last" in rep:
        assert rep["distance_D2_C_last"] == rep["expected_D2_C_last"]


def test_consecutive_incompatibility_when_ends_are_one():
    assert boundary_report(G(1, 1, 1))["consecutive_incompatible"]
    g = G(1, 1, 1)
    d1, c3 = chain_by_name(g, "D1"), chain_by_name(g, "C3")
    assert incompatible(g, d1, c3)


@pytest.mark.parametrize("mv", [m for m in all_mvs(6) if m.m >= 2], ids=str)
def test_orientation_lemmas_hold_for_whole_group(mv):
    g = build_gamma(mv)
    group = close_group(generators(g), g)
    for x in group.elements:
        rep = check_orientation_lemmas(g, x)
        assert rep["passed"], (str(mv), x.label, rep)


@pytest.mark.parametrize("mv", [m for m in all_mvs(6) if m.m >= 3], ids=str)
def test_sequence_reversed_iff_reverse_symmetric(mv):
    g = build_gamma(mv)
    actions = {sequence_action(g, x) for x in close_group(generators(g), g).elements}
    assert "broken" not in actions
    assert ("reversed" in actions) == is_reverse_symmetric(mv)


def test_rho_maps_chains_to_chains():
    g = G(1, 1, 1)
    rho = gen_flip(g)
    sets = {c.as_set() for c in partition_chains(g)}
    for c in partition_chains(g):
        assert frozenset(rho.perm[f] for f in c.facets) in sets
    assert sequence_action(g, rho) == "reversed"


def test_length_one_sets_and_report():
    g = G(2, 1, 2)
    left, right = length_one_sets(g)
    assert left and right
    rep = chain_report(g)
    assert rep["is_tree"] and len(rep["chains"]) == len(partition_chains(g))
    dot = chain_graph_dot(build_chain_graph(g))
    assert dot.startswith("graph") and dot.rstrip().endswith("}")


def test_path_shaped_tree_54():
    cg = build_chain_graph(G(5, 4))
    degree = [0] * len(cg.nodes)
    for i, j, _ in cg.edges:
        degree[i] += 1
        degree[j] += 1
    assert cg.is_tree() and max(degree) <= 2 and len(cg.leaves) == 2


def test_tree_edges_have_adjacency_points():
    g = G(2, 1, 2, 3, 1)
    cg = build_chain_graph(g)
    assert cg.is_tree() and cg.edges
    for i, j, k in cg.edges:
        assert k >= 1 and chains_adjacent(g, cg.nodes[i], cg.nodes[j]) == k

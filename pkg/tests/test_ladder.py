import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gtpoly.autgroup import gen_corner
from gtpoly.grid import build_gamma
from gtpoly.ladder import (
    EMPTY,
    BudgetExceeded,
    GTPoint,
    GTPointError,
    GridMismatch,
    LadderDiagram,
    bounded_regions,
    enumerate_faces,
    enumerate_vertices,
    euler_characteristic_ok,
    face_census,
    face_from_facets,
    facets_containing,
    includes,
    is_edge,
    meet,
    point_to_ladder,
    random_gt_point,
    satisfies_face,
    superimpose,
    validate,
)
from gtpoly.partition import MultiplicityVector, all_mvs, dimension

import oracles


def G(*a):
    return build_gamma(MultiplicityVector.of(a))


# grids whose free-edge subsets can be searched exhaustively
ORACLE_MVS = [mv for mv in all_mvs(4) if build_gamma(mv).num_edges - 2 * mv.n <= 16]


def test_validate_examples():
    g = G(1, 1, 1)
    assert validate(g, g.full)
    assert validate(g, g.full & ~(1 << g.removable[0]))
    y_axis = g.edge_id((0, 0), (0, 1))
    assert not validate(g, g.full & ~(1 << y_axis))
    assert validate(g, [g.edges[i] for i in range(g.num_edges)])


def test_bounded_regions_examples():
    assert bounded_regions(LadderDiagram.top(G(1, 1, 1))) == 3
    assert bounded_regions(LadderDiagram.top(G(1, 1))) == 1
    assert all(bounded_regions(v) == 0 for v in enumerate_vertices(G(2, 2)))


def test_vertex_counts():
    assert len(enumerate_vertices(G(1, 1, 1))) == 7
    assert len(enumerate_vertices(G(1, 1))) == 2
    assert len(enumerate_vertices(G(2, 2))) == 6
    assert len(enumerate_vertices(G(3))) == 1


@pytest.mark.parametrize("mv", ORACLE_MVS, ids=str)
def test_vertices_match_exhaustive_search(mv):
    g = build_gamma(mv)
    assert sorted(v.mask for v in enumerate_vertices(g)) == oracles.vertices(g)


@pytest.mark.parametrize("mv", ORACLE_MVS, ids=str)
def test_f_vector_matches_exhaustive_search(mv):
    g = build_gamma(mv)
    assert enumerate_faces(g).f_vector == oracles.f_vector(g)
    assert face_census(g)[0] == oracles.f_vector(g)


def test_lattice_examples():
    lat = enumerate_faces(G(1, 1))
    assert lat.f_vector == (2, 1)
    assert lat.faces[-1] == [EMPTY]
    assert enumerate_faces(G(1, 1, 1)).f_vector == (7, 11, 6, 1)
    assert enumerate_faces(G(2, 2)).f_vector == (6, 13, 13, 6, 1)
    assert enumerate_faces(G(3)).f_vector == (1,)


@pytest.mark.parametrize("mv", all_mvs(5), ids=str)
def test_lattice_graded_euler_and_facets(mv):
    g = build_gamma(mv)
    lat = enumerate_faces(g)
    d = dimension(mv)
    assert lat.is_graded() and lat.grading_errors == 0
    assert euler_characteristic_ok(lat.f_vector)
    if d >= 1:
        assert lat.f_vector[d - 1] == g.num_facets
    # covers drop exactly one region and are strict inclusions
    for a, b in lat.covers:
        if a != EMPTY:
            assert a & ~b == 0 and a != b
            assert g.connected_regions(b) - g.connected_regions(a) == 1
    assert face_census(g)[:2] == (lat.f_vector, 0)


def test_budget_refusal():
    with pytest.raises(BudgetExceeded, match="face count"):
        enumerate_faces(G(1, 1, 1, 1), max_faces=10)
    with pytest.raises(BudgetExceeded):
        face_census(G(1, 1, 1, 1), max_faces=10)


def test_inclusion_and_join():
    g = G(1, 1)
    v, w = enumerate_vertices(g)
    top = LadderDiagram.top(g)
    assert includes(v, top) and includes(v, v) and not includes(v, w)
    assert superimpose(v, v) == v
    assert superimpose(v, top) == top
    assert superimpose(v, w) == top and bounded_regions(superimpose(v, w)) == 1
    assert meet(v, w).is_empty
    assert meet(v, top) == v
    assert is_edge(v, w) and not is_edge(v, v)


def test_mismatched_grids_rejected():
    with pytest.raises(GridMismatch):
        includes(LadderDiagram.top(G(1, 1)), LadderDiagram.top(G(2, 1)))


@pytest.mark.parametrize("mv", [m for m in all_mvs(4) if m.m >= 2], ids=str)
def test_superimpose_is_least_upper_bound(mv):
    g = build_gamma(mv)
    faces = [f for f in enumerate_faces(g).all_faces() if f != EMPTY]
    face_set = set(faces)
    # any upper bound contains a | b, so a | b being a face makes it the least one
    for a in faces:
        for b in faces:
            assert a | b in face_set


def test_distinct_vertices_incomparable():
    for mv in all_mvs(5):
        vs = enumerate_vertices(build_gamma(mv))
        for a in vs:
            for b in vs:
                if a != b:
                    assert not includes(a, b)


def test_meet_of_facets_111():
    g = G(1, 1, 1)
    lat = enumerate_faces(g)
    for i in range(g.num_facets):
        for j in range(i + 1, g.num_facets):
            f = face_from_facets(g, 1 << i | 1 << j)
            if f != EMPTY and g.connected_regions(f) == 1:
                assert f in lat.faces[1]


def test_facets_containing_round_trip():
    for mv in all_mvs(4):
        g = build_gamma(mv)
        for f in enumerate_faces(g).all_faces():
            if f != EMPTY:
                assert face_from_facets(g, facets_containing(g, f)) == f


# --- GT points -----------------------------------------------------------------


def test_gt_check_names_constraint():
    p = GTPoint.from_rows([[1], [3, 2], [1, 2, 3]])
    with pytest.raises(GTPointError, match=r"x_\{2,1\} <= lambda_2"):
        p.check()


def test_generic_point_gives_top():
    rng = random.Random(3)
    for mv in all_mvs(5):
        g = build_gamma(mv)
        p = random_gt_point(mv, rng, generic=True)
        assert point_to_ladder(g, p).mask == g.full


def test_capped_point_gives_vertex():
    # every free entry pushed up to its row's lambda
    mv = MultiplicityVector.of((1, 2, 1))
    g = build_gamma(mv)
    lam = [1, 2, 2, 3]
    rows = [[Fraction(lam[i])] * (i + 1) for i in range(4)]
    v = point_to_ladder(g, GTPoint(tuple(tuple(r) for r in rows)))
    assert v.is_valid() and v.dimension == 0


def test_point_wrong_partition_rejected():
    g = G(1, 1, 1)
    with pytest.raises(GTPointError):
        point_to_ladder(g, GTPoint.from_rows([[1], [1, 1], [1, 1, 3]]))


@pytest.mark.parametrize("mv", [m for m in all_mvs(5) if m.m >= 2], ids=str)
def test_point_to_ladder_is_minimal_face(mv):
    g = build_gamma(mv)
    faces = [f for f in enumerate_faces(g).all_faces() if f != EMPTY]
    rng = random.Random(sum(mv.mults) * 31 + mv.m)
    for _ in range(15 if mv.n <= 4 else 4):
        p = random_gt_point(mv, rng)
        got = point_to_ladder(g, p)
        assert got.is_valid()
        holding = [f for f in faces if satisfies_face(g, p, f)]
        low = min(g.connected_regions(f) for f in holding)
        minimal = [f for f in holding if g.connected_regions(f) == low]
        assert minimal == [got.mask]


@pytest.mark.parametrize("mv", [m for m in all_mvs(5) if m.m >= 2], ids=str)
def test_mu_matches_affine_reflection(mv):
    # x_{n,1} -> x_{n,2} + x_{n-1,1} - x_{n,1} on points, mu on faces
    g = build_gamma(mv)
    mu = gen_corner(g)
    n = mv.n
    rng = random.Random(n * 7 + mv.m)
    for _ in range(20):
        p = random_gt_point(mv, rng)
        rows = [list(r) for r in p.rows]
        rows[n - 1][0] = rows[n - 1][1] + rows[n - 2][0] - rows[n - 1][0]
        q = GTPoint(tuple(tuple(r) for r in rows))
        assert mu.apply(point_to_ladder(g, p).mask) == point_to_ladder(g, q).mask


@given(st.lists(st.integers(1, 3), min_size=2, max_size=4).filter(lambda a: sum(a) <= 6), st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_random_points_are_valid(mults, seed):
    mv = MultiplicityVector.of(mults)
    g = build_gamma(mv)
    p = random_gt_point(mv, random.Random(seed))
    p.check()
    ld = point_to_ladder(g, p)
    assert oracles.is_ladder(g, ld.mask)
    assert ld.dimension == oracles.regions(g, ld.mask)

from fractions import Fraction

import pytest

from pantograph import census
from pantograph.series import solve_R, dlogR_dt, QUAD


def rows(series):
    return series.rows()


# -- polygon sewing against known rooted counts -----------------------

@pytest.mark.parametrize("n,rooted", [(1, 2), (2, 9), (3, 54), (4, 378)])
def test_sphere_quadrangulations_rooted_counts(n, rooted):
    maps = census.polygon_gluings([4] * n)
    assert census.rooted_count(maps) == rooted
    for m in maps:
        assert m.num_faces == n
        assert all(m.face_degree(f) == 4 for f in range(m.num_faces))
        assert m.num_vertices - m.num_edges + m.num_faces == 2


def test_theta_graph_is_the_only_three_two_gon_map():
    maps = census.polygon_gluings([2, 2, 2])
    assert len(maps) == 1
    assert (maps[0].num_vertices, maps[0].num_edges) == (2, 3)


def test_single_two_gon_gives_single_edge():
    maps = census.polygon_gluings([2])
    assert len(maps) == 1
    assert (maps[0].num_vertices, maps[0].num_edges) == (2, 1)


# -- labeled boundary enumeration -------------------------------------

def test_triply_pointed_one_quad():
    maps = census.enumerate_bounded_maps({"A": 0, "B": 0, "C": 0}, 1)
    assert len(maps) == 3
    poly = census.weighted_polynomial(maps, "pants", 1)
    assert rows(poly) == [((1,), 0, 3, 1)]


def test_theta_as_labeled_pants():
    maps = census.enumerate_bounded_maps({"A": 2, "B": 2, "C": 2}, 0)
    assert len(maps) == 1
    poly = census.weighted_polynomial(maps, "pants", 0)
    assert rows(poly) == [((0,), 2, 1, 1)]


def test_keep_filter_is_applied():
    maps = census.enumerate_bounded_maps({"A": 0, "B": 0, "C": 0}, 1,
                                         keep=lambda m: False)
    assert maps == []


# -- piece censuses against the one-boundary series -------------------

def test_elementary_slices_match_R():
    R = solve_R(2, QUAD)
    pieces = census.enumerate_pieces(
        "slice", 2, [2, 4, 6, 8],
        predicate=lambda r: r["width"] == 1,
        include_vertex_piece=False)
    poly = census.weighted_polynomial(pieces, "slice", 2)
    assert poly == R
    # contour degree 8 is a sentinel: no slice with at most two inner
    # faces reaches it, certifying the cut-off
    assert not census.enumerate_pieces(
        "slice", 2, [8], predicate=lambda r: r["width"] == 1,
        include_vertex_piece=False)


def test_balanced_diangles():
    pieces = census.enumerate_pieces(
        "diangle", 1, [2, 4],
        predicate=lambda r: r["exceedance"] == 0)
    poly = census.weighted_polynomial(pieces, "diangle", 1)
    assert rows(poly) == [((0,), 1, 1, 1), ((1,), 2, 1, 1)]


def test_triangles_up_to_two_faces():
    pieces = census.enumerate_pieces("triangle", 2, [2, 4, 6])
    assert len(pieces) == 1
    assert pieces[0].is_vertex_piece()
    poly = census.weighted_polynomial(pieces, "triangle", 2)
    assert rows(poly) == [((0,), 1, 1, 1)]


def test_triply_pointed_matches_dlogR():
    maps = census.enumerate_bounded_maps({"A": 0, "B": 0, "C": 0}, 2)
    poly = census.weighted_polynomial(maps, "pants", 2)
    D = dlogR_dt(solve_R(2, QUAD))
    # d ln(R/t) / dt = d ln R / dt - 1/t
    want = D - D.t_power(D.order, D.degrees, -1)
    assert poly == want


def test_weighted_polynomial_rejects_unknown_weighting():
    with pytest.raises(census.CensusError):
        census.weighted_polynomial([], "nope", 1)

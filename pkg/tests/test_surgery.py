import pytest

from pantograph.mapcore import PlanarMap, BoundaryRef, isomorphic
from pantograph import surgery
from helpers import path_map, quad_map, hexgrid_map


def outer_contour(m):
    ref = m.boundaries["outer"]
    return m.face_contours()[m.face_of[ref.dart]]


def test_extract_whole_map():
    for m in (path_map(3)[0], quad_map()[0], hexgrid_map()[0]):
        piece, new = surgery.extract_piece(m, outer_contour(m))
        assert piece.validate() == []
        assert isomorphic(piece, m)


def test_extract_one_square_of_hexgrid():
    m, dart = hexgrid_map()
    contour = [dart[p] for p in
               (("a", "b"), ("b", "e"), ("e", "f"), ("f", "a"))]
    piece, new = surgery.extract_piece(m, contour)
    assert piece.validate() == []
    assert (piece.num_vertices, piece.num_edges, piece.num_faces) == (4, 4, 2)
    assert isomorphic(piece, quad_map()[0])


def test_extract_out_and_back():
    m, dart = quad_map()
    contour = [dart[("A", "B")], dart[("B", "A")]]
    piece, new = surgery.extract_piece(m, contour)
    assert piece.validate() == []
    assert (piece.num_vertices, piece.num_edges) == (2, 1)


def test_extract_rejects_open_walk():
    m, dart = quad_map()
    with pytest.raises(ValueError):
        surgery.extract_piece(m, [dart[("A", "B")], dart[("B", "C")]])


def test_fold_square_to_path():
    # fold the edge AB onto BC: C merges with A, leaving a two-gon plus
    # a pendant edge; folding the two-gon then leaves a path
    m, dart = quad_map()
    b = surgery.MapBuilder.from_map(m)
    b.fold(dart[("A", "B")])
    ref = BoundaryRef("face", b.resolve(dart[("A", "B")]))
    mid, _ = b.finalize({"outer": ref})
    assert mid.validate() == []
    assert (mid.num_vertices, mid.num_edges, mid.num_faces) == (3, 3, 2)
    assert sorted(len(f) for f in mid.face_contours()) == [2, 4]
    b.fold(dart[("C", "D")])     # one side of the two-gon
    out, _ = b.finalize({"outer": BoundaryRef("face",
                                              b.resolve(dart[("A", "B")]))})
    assert out.validate() == []
    assert (out.num_vertices, out.num_edges, out.num_faces) == (3, 2, 1)
    assert isomorphic(out, path_map(2)[0])


def test_fold_refuses_degenerate():
    # on a single edge, phi(d) = alpha(d): folding an edge onto itself
    m, _ = path_map(1)
    b = surgery.MapBuilder.from_map(m)
    with pytest.raises(ValueError):
        b.fold(0)


def test_corner_glue_two_paths():
    m1, _ = path_map(1)
    m2, _ = path_map(1)
    b = surgery.MapBuilder()
    off1 = b.add_disjoint(m1)
    off2 = b.add_disjoint(m2)
    b.corner_glue(off1 + 1, off2 + 0)
    out, _ = b.finalize({"outer": BoundaryRef("face", off1)})
    assert out.validate() == []
    assert isomorphic(out, path_map(2)[0])


def test_corner_glue_then_fold_roundtrip():
    # glue two single edges at a corner, fold them together: one edge
    m1, _ = path_map(1)
    m2, _ = path_map(1)
    b = surgery.MapBuilder()
    off1 = b.add_disjoint(m1)
    off2 = b.add_disjoint(m2)
    b.corner_glue(off1 + 1, off2 + 0)
    b.fold(off1 + 0)     # fold the two edges together around the corner
    out, _ = b.finalize({"outer": BoundaryRef("face",
                                              b.resolve(off1 + 0))})
    assert out.validate() == []
    assert isomorphic(out, path_map(1)[0])

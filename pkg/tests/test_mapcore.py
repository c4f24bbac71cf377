import random

import pytest
from hypothesis import given, strategies as st

from pantograph.mapcore import PlanarMap, BoundaryRef, vertex_map, isomorphic
from helpers import path_map, quad_map, hexgrid_map


def test_path_counts():
    m, _ = path_map(3)
    assert m.validate() == []
    assert (m.num_vertices, m.num_edges, m.num_faces) == (4, 3, 1)
    assert m.boundary_length("outer") == 6


def test_quad_counts():
    m, dart = quad_map()
    assert m.validate() == []
    assert (m.num_vertices, m.num_edges, m.num_faces) == (4, 4, 2)
    assert m.boundary_length("outer") == 4
    assert len(m.inner_faces()) == 1
    assert m.face_degree(m.inner_faces()[0]) == 4
    contour = m.face_contours()[m.face_of[dart[("A", "B")]]]
    verts = ["ABCD"[m.vertex_of[d]] if m.vertex_of[d] < 4 else "?"
             for d in contour]
    assert len(contour) == 4


def test_hexgrid_counts():
    m, _ = hexgrid_map()
    assert m.validate() == []
    assert (m.num_vertices, m.num_edges, m.num_faces) == (6, 7, 3)
    assert sorted(m.face_degree(f) for f in m.inner_faces()) == [4, 4]


def test_vertex_map():
    m = vertex_map("outer")
    assert m.validate() == []
    assert (m.num_vertices, m.num_edges, m.num_faces) == (1, 0, 1)
    assert m.boundary_length("outer") == 0


def test_validate_catches_breakage():
    m, _ = quad_map()
    broken = PlanarMap([0] + list(m.alpha[1:]), m.sigma, m.boundaries)
    assert broken.validate()
    # a disconnected union of two edges
    two = PlanarMap([1, 0, 3, 2], [0, 1, 2, 3],
                    {"outer": BoundaryRef("face", 0)})
    assert any("connected" in d for d in two.validate())


def test_odd_inner_face_detected():
    # a triangle has an odd inner face
    rot = {"A": ["B", "C"], "B": ["C", "A"], "C": ["A", "B"]}
    from helpers import map_from_rotations
    m, _ = map_from_rotations(rot, ("A", "B"))
    assert any("odd degree" in d for d in m.validate())


@given(st.randoms(use_true_random=False))
def test_canonical_code_relabeling_invariant(rng):
    maps = [path_map(2)[0], path_map(4)[0], quad_map()[0], hexgrid_map()[0]]
    for m in maps:
        perm = list(range(m.n))
        rng.shuffle(perm)
        m2 = m.relabeled(perm)
        assert m2.validate() == []
        assert m2.canonical_code() == m.canonical_code()
        assert isomorphic(m, m2)


def test_canonical_code_separates():
    seen = {m.canonical_code()
            for m in (path_map(2)[0], path_map(3)[0], quad_map()[0],
                      hexgrid_map()[0], vertex_map("outer"))}
    assert len(seen) == 5


def test_canonical_code_sees_roots():
    m, dart = quad_map()
    rooted1 = PlanarMap(m.alpha, m.sigma,
                        {"outer": BoundaryRef("face", dart[("A", "B")],
                                              dart[("A", "B")])})
    rooted2 = PlanarMap(m.alpha, m.sigma,
                        {"outer": BoundaryRef("face", dart[("A", "B")],
                                              dart[("B", "C")])})
    # the quadrangle has a rotational symmetry, so rooting at any corner
    # gives isomorphic rooted maps, but rooting must differ from not rooting
    assert rooted1.canonical_code() == rooted2.canonical_code()
    assert rooted1.canonical_code() != m.canonical_code()


def test_json_roundtrip():
    for m in (quad_map()[0], hexgrid_map()[0], vertex_map("outer")):
        again = PlanarMap.loads(m.dumps())
        assert again.canonical_code() == m.canonical_code()


def test_blowup_contract_roundtrip():
    m, dart = quad_map()
    marked = PlanarMap(m.alpha, m.sigma,
                       {"outer": m.boundaries["outer"],
                        "inner": BoundaryRef("vertex", dart[("C", "D")])})
    blown = marked.blowup_boundary_vertices()
    assert blown.validate() == []
    assert blown.boundary_length("inner") == 0
    assert blown.num_edges == marked.num_edges + 2
    back = blown.contract_marker_cycles()
    assert back.canonical_code() == marked.canonical_code()


def test_blowup_vertex_map():
    m = vertex_map("outer")
    blown = m.blowup_boundary_vertices()
    assert blown.validate() == []
    assert blown.boundary_length("outer") == 0
    assert blown.contract_marker_cycles().canonical_code() \
        == m.canonical_code()

import pytest
from hypothesis import given, strategies as st

from pantograph.mapcore import PlanarMap, BoundaryRef
from pantograph import geodesy, assembly, census, cover


def chain_diangle(length):
    """A path of the given length as a diangle of that exceedance:
    one side carries all the edges, the other is empty."""
    alpha = []
    sigma = list(range(2 * length))
    for i in range(length):
        alpha += [2 * i + 1, 2 * i]
    for i in range(1, length):
        sigma[2 * i] = 2 * i - 1
        sigma[2 * i - 1] = 2 * i
    m = PlanarMap(alpha, sigma, {"outer": BoundaryRef("face", 0)})
    far = m.sigma[m.alpha[2 * (length - 1)]]
    p = geodesy.MarkedPiece(m, "diangle",
                            {"c1": 0, "c21": 0, "c12": far, "c2": far})
    assert geodesy.validate_piece(p)["exceedance"] == length
    return p


def hexagon_triangle():
    """The six-cycle as a triangle with sides (1, 1, 1): apices and
    attachment corners alternate around the hexagon."""
    alpha = []
    sigma = list(range(12))
    for i in range(6):
        alpha += [2 * i + 1, 2 * i]
    for i in range(6):
        sigma[(2 * i - 1) % 12] = 2 * i
        sigma[2 * i] = (2 * i - 1) % 12
    m = PlanarMap(alpha, sigma, {"outer": BoundaryRef("face", 0)})
    p = geodesy.MarkedPiece(
        m, "triangle",
        {"c1": 0, "c12": 2, "c2": 4, "c23": 6, "c3": 8, "c31": 10})
    assert geodesy.validate_piece(p)["sides"] == (1, 1, 1)
    return p


def vertex_diangle():
    return geodesy.MarkedPiece.vertex_piece("diangle")


def vertex_triangle():
    return geodesy.MarkedPiece.vertex_piece("triangle")


def total_weight(q):
    return sum(geodesy.validate_piece(p)["weighted_vertices"]
               for p in q.pieces())


def check_invariants(q, m):
    """Shared sanity checks: inner faces survive unchanged, the
    weighted vertex count drops by six, boundaries are tight."""
    want = sorted(d for p in q.pieces()
                  for d in geodesy.validate_piece(p)["inner_face_degrees"])
    bnd_faces = {m.boundary_target(x)[1] for x in "ABC"
                 if m.boundaries[x].kind == "face"}
    got = sorted(len(c) for f, c in enumerate(m.face_contours())
                 if f not in bnd_faces)
    assert got == want
    bnd_vertices = {m.boundary_target(x)[1] for x in "ABC"
                    if m.boundaries[x].kind == "vertex"}
    assert m.num_vertices - len(bnd_vertices) == total_weight(q) - 6
    for x in "ABC":
        assert cover.is_tight(m, x)


# -- the lattice-path matching -----------------------------------------

def test_matching_with_positive_excess():
    pat = assembly.red_to_blue_match([-1, 1, 1])
    assert pat.matches == {0: 1}
    assert pat.unmatched == [2]
    assert pat.vertex_positions == []


def test_matching_with_zero_excess():
    pat = assembly.red_to_blue_match([-1, -1, 1, 1])
    assert pat.matches == {0: 3, 1: 2}
    assert pat.unmatched == []
    assert pat.vertex_positions == [0]


def test_matching_rejects_negative_excess():
    with pytest.raises(assembly.AssemblyError):
        assembly.red_to_blue_match([-1, 1, -1])


@given(st.lists(st.sampled_from([-1, 1]), max_size=24))
def test_matching_properties(eps):
    if sum(eps) < 0:
        return
    pat = assembly.red_to_blue_match(eps)
    period = len(eps)
    assert len(pat.unmatched) == sum(eps)
    assert sorted(pat.matches) == [k for k in range(period) if eps[k] == -1]
    for k, l in pat.matches.items():
        # the sequence from the red to its blue returns to height zero
        # and stays strictly below in between
        total = 0
        step = 0
        while True:
            total += eps[(k + step) % period]
            if (k + step) % period == l:
                break
            assert total < 0
            step += 1
        assert total == 0
    if sum(eps) == 0 and period:
        assert pat.vertex_positions
        for k in pat.vertex_positions:
            run = [eps[(k + s) % period] for s in range(period)]
            assert all(sum(run[:i + 1]) <= 0 for i in range(period))


# -- assembling quintuples ---------------------------------------------

def test_unit_chains_give_the_theta_map():
    q = assembly.Quintuple([chain_diangle(1) for _ in range(3)],
                           [vertex_triangle(), vertex_triangle()])
    assert q.exceedances == [1, 1, 1]
    m = assembly.assemble(q, "I")
    assert [m.boundary_length(x) for x in "ABC"] == [2, 2, 2]
    assert not m.validate()
    theta = census.enumerate_bounded_maps({"A": 2, "B": 2, "C": 2}, 0)[0]
    assert m.canonical_code() == theta.canonical_code()
    check_invariants(q, m)


def test_unit_chains_procedure_two():
    q = assembly.Quintuple([chain_diangle(1) for _ in range(3)],
                           [vertex_triangle(), vertex_triangle()])
    m = assembly.assemble(q, "II")
    assert [m.boundary_length(x) for x in "ABC"] == [1, 4, 1]
    assert not m.validate()
    check_invariants(q, m)


def test_procedures_give_distinct_maps():
    q = assembly.Quintuple([chain_diangle(1) for _ in range(3)],
                           [vertex_triangle(), vertex_triangle()])
    m1 = assembly.assemble(q, "I")
    m2 = assembly.assemble(q, "II")
    assert m1.canonical_code() != m2.canonical_code()


def test_trivial_quintuple_is_rejected():
    q = assembly.Quintuple([vertex_diangle() for _ in range(3)],
                           [vertex_triangle(), vertex_triangle()])
    with pytest.raises(assembly.AssemblyError):
        assembly.assemble(q, "I")


def test_bad_procedure_name():
    q = assembly.Quintuple([chain_diangle(1) for _ in range(3)],
                           [vertex_triangle(), vertex_triangle()])
    with pytest.raises(assembly.AssemblyError):
        assembly.assemble(q, "III")


def test_full_zip_collapses_boundaries_to_vertices():
    # two hexagon triangles and trivial diangles zip completely shut:
    # the result is the six-cycle with three marked vertices
    q = assembly.Quintuple([vertex_diangle() for _ in range(3)],
                           [hexagon_triangle(), hexagon_triangle()])
    for proc in ("I", "II"):
        m = assembly.assemble(q, proc)
        assert not m.validate()
        assert m.n == 12 and m.num_vertices == 6
        assert sorted(len(c) for c in m.face_contours()) == [6, 6]
        targets = set()
        for x in "ABC":
            kind, v = m.boundary_target(x)
            assert kind == "vertex"
            targets.add(v)
        assert len(targets) == 3
        check_invariants(q, m)


def test_mixed_quintuple_both_procedures():
    q = assembly.Quintuple([chain_diangle(1) for _ in range(3)],
                           [hexagon_triangle(), hexagon_triangle()])
    m1 = assembly.assemble(q, "I")
    assert [m1.boundary_length(x) for x in "ABC"] == [2, 2, 2]
    assert not m1.validate()
    check_invariants(q, m1)
    m2 = assembly.assemble(q, "II")
    assert [m2.boundary_length(x) for x in "ABC"] == [1, 4, 1]
    assert not m2.validate()
    check_invariants(q, m2)


def test_asymmetric_chain_lengths():
    q = assembly.Quintuple([chain_diangle(2), chain_diangle(1),
                            chain_diangle(1)],
                           [vertex_triangle(), vertex_triangle()])
    m = assembly.assemble(q, "I")
    assert [m.boundary_length(x) for x in "ABC"] == [3, 2, 3]
    assert not m.validate()
    check_invariants(q, m)
    m = assembly.assemble(q, "II")
    assert [m.boundary_length(x) for x in "ABC"] == [1, 6, 1]
    assert not m.validate()
    check_invariants(q, m)


def test_quintuple_round_trips_through_json():
    q = assembly.Quintuple([chain_diangle(1) for _ in range(3)],
                           [hexagon_triangle(), vertex_triangle()])
    q2 = assembly.Quintuple.from_json(q.to_json())
    assert q2.exceedances == q.exceedances
    m1 = assembly.assemble(q, "I")
    m2 = assembly.assemble(q2, "I")
    assert m1.canonical_code() == m2.canonical_code()

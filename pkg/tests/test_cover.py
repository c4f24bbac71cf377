import pytest

from pantograph.mapcore import PlanarMap, BoundaryRef
from pantograph import cover, census


def star_map():
    """Center vertex joined to three leaves, each leaf a marked vertex."""
    return PlanarMap([1, 0, 3, 2, 5, 4], [2, 1, 4, 3, 0, 5],
                     {"A": BoundaryRef("vertex", 1),
                      "B": BoundaryRef("vertex", 3),
                      "C": BoundaryRef("vertex", 5)})


def two_edge_path():
    """Path on three vertices: the ends carry A and B, the middle C."""
    return PlanarMap([1, 0, 3, 2], [0, 2, 1, 3],
                     {"A": BoundaryRef("vertex", 0),
                      "B": BoundaryRef("vertex", 3),
                      "C": BoundaryRef("vertex", 1)})


def theta_map():
    maps = census.enumerate_bounded_maps({"A": 2, "B": 2, "C": 2}, 0)
    assert len(maps) == 1
    return maps[0]


# -- reduced words -----------------------------------------------------

def test_word_reduction_and_products():
    assert cover.reduce_word("aA") == ""
    assert cover.reduce_word("acCA") == ""
    assert cover.mul("ac", "Ca") == "aa"
    assert cover.inv_word("aC") == "cA"
    assert cover.cyclic_reduce("Acaca") == "cac"
    assert cover.conjugacy_class("caa") == "aac"
    assert set(cover.rotations("ac")) == {"ac", "ca"}


def test_coset_canonical_forms():
    # representatives of w<p> are shortest, ties broken lexicographically
    assert cover.coset_canon("aaa", "a") == ""
    assert cover.coset_canon("caa", "a") == "c"
    assert cover.coset_canon("", "ac") == ""
    w, n = cover.left_canon("aac", "a")
    assert w == "c"
    power = "a" * n if n >= 0 else "A" * -n
    assert cover.mul(power, "aac") == w


# -- arc systems and homotopy words ------------------------------------

def test_theta_labels_satisfy_face_invariant():
    m = theta_map()
    arcs, labels = cover.build_arc_system(m)
    mb = labels.map
    # every inner face of the doubled map multiplies to the identity,
    # every marked face to (a conjugate of) its generator
    for f, contour in enumerate(mb.face_contours()):
        w = cover.conjugacy_class(labels.word(contour))
        kind, _ = mb.boundary_target("A")
        lab = None
        for name in "ABC":
            k, orbit = mb.boundary_target(name)
            if k == "face" and orbit == f:
                lab = name
        if lab is None:
            assert w == ""
        else:
            assert w == cover.generator_class(m, lab)


def test_contractible_walk_has_trivial_word():
    m = theta_map()
    arcs, labels = cover.build_arc_system(m)
    mb = labels.map
    d = 0
    assert cover.reduce_word(
        cover.homotopy_word(m, labels, [d, mb.alpha[d]])) == ""


def test_open_walk_is_rejected():
    m = theta_map()
    arcs, labels = cover.build_arc_system(m)
    mb = labels.map
    d = next(d for d in range(len(mb.alpha))
             if mb.vertex_of[mb.alpha[d]] != mb.vertex_of[d])
    with pytest.raises(cover.CoverError):
        cover.homotopy_word(m, labels, [d])


def test_build_arc_system_needs_three_marked_boundaries():
    m = PlanarMap([1, 0], [0, 1], {"outer": BoundaryRef("face", 0)})
    with pytest.raises(cover.CoverError):
        cover.build_arc_system(m)


# -- minimal cycles and tightness --------------------------------------

def test_theta_minimal_cycles():
    m = theta_map()
    arcs, labels = cover.build_arc_system(m)
    for lab in "ABC":
        cert = cover.min_homotopic_cycle(m, lab, labels=labels)
        assert cert.two_l == 2
        assert cover.brute_min_cycle(m, lab, labels=labels) == 2
        assert cover.is_tight(m, lab, labels=labels)
        w = cover.homotopy_word(m, labels, cert.witness)
        assert cover.conjugacy_class(w) == cover.generator_class(m, lab)


def test_pendant_theta_family_tightness():
    # boundary degrees (4, 2, 2) with no inner faces: three maps, and
    # only one of them keeps its long boundary incompressible
    fam = census.enumerate_bounded_maps({"A": 4, "B": 2, "C": 2}, 0)
    assert len(fam) == 3
    lengths = []
    for m in fam:
        arcs, labels = cover.build_arc_system(m)
        cert = cover.min_homotopic_cycle(m, "A", labels=labels)
        assert cert.two_l == cover.brute_min_cycle(m, "A", labels=labels)
        assert cover.is_tight(m, "A", labels=labels) == (cert.two_l == 4)
        w = cover.homotopy_word(m, labels, cert.witness)
        assert cover.conjugacy_class(w) == cover.generator_class(m, "A")
        lengths.append(cert.two_l)
    assert sorted(lengths) == [2, 2, 4]


def test_vertex_boundaries_have_zero_length():
    for m in (star_map(), two_edge_path()):
        arcs, labels = cover.build_arc_system(m)
        for lab in "ABC":
            cert = cover.min_homotopic_cycle(m, lab, labels=labels)
            assert cert.two_l == 0
            assert cover.brute_min_cycle(m, lab, labels=labels) == 0
            assert cover.is_tight(m, lab, labels=labels)


def test_minimal_cycles_match_exhaustive_search_on_census_sample():
    sample = []
    sample += census.enumerate_bounded_maps({"A": 2, "B": 2, "C": 2}, 1)
    sample += census.enumerate_bounded_maps({"A": 0, "B": 0, "C": 0}, 2)
    for m in sample:
        arcs, labels = cover.build_arc_system(m)
        for lab in "ABC":
            cert = cover.min_homotopic_cycle(m, lab, labels=labels)
            assert cert.two_l == cover.brute_min_cycle(m, lab, labels=labels)


# -- the truncated cover ----------------------------------------------

def test_star_cover_node_counts():
    m = star_map()
    arcs, labels = cover.build_arc_system(m)
    cov = cover.expand_cover(m, labels, W=1)
    regular = [k for k in cov.nodes if k[0] == "r"]
    ideal = [k for k in cov.nodes if k[0] == "i"]
    # the center lifts once per reduced word of length at most one
    assert len(regular) == 5
    assert len(ideal) == 10
    assert len(cov.nodes) == 15


def test_deck_action_permutes_nodes():
    m = theta_map()
    arcs, labels = cover.build_arc_system(m)
    cov = cover.expand_cover(m, labels, W=3)
    moved = 0
    for i, key in enumerate(cov.nodes):
        j = cov.deck("a", i)
        if j is not None:
            assert cov.nodes[j][0] == key[0]
            if j != i:
                moved += 1
    assert moved > 0


def test_cover_expansion_is_monotone():
    m = theta_map()
    arcs, labels = cover.build_arc_system(m)
    small = cover.expand_cover(m, labels, W=2)
    big = cover.expand_cover(m, labels, W=4)
    assert set(small.nodes) <= set(big.nodes)


# -- boundary distance fields ------------------------------------------

def test_theta_fields_certify_and_translate():
    m = theta_map()
    arcs, labels = cover.build_arc_system(m)
    cov = cover.expand_cover(m, labels, W=5)
    field = cover.busemann_field(cov, "A")
    assert field.two_a == 2
    assert field.certified
    # moving one period toward the boundary lowers the field by 2a
    for i in field.certified:
        j = cov.deck(field.period, i)
        if j is not None and j in field.certified:
            assert field.values[j] == field.values[i] - 2


def test_theta_field_is_one_lipschitz_with_parity():
    m = theta_map()
    arcs, labels = cover.build_arc_system(m)
    cov = cover.expand_cover(m, labels, W=5)
    fa = cover.busemann_field(cov, "A")
    fb = cover.busemann_field(cov, "B")
    common = fa.certified & fb.certified
    assert common
    dab, _ = cover.pair_distance_and_latitudes(cov, "A", "B", fa, fb)
    for i in common:
        assert (fa.values[i] + fb.values[i] - dab) % 2 == 0
        assert fa.values[i] + fb.values[i] >= dab


def test_field_rejects_compressible_boundary():
    fam = census.enumerate_bounded_maps({"A": 4, "B": 2, "C": 2}, 0)
    loose = [m for m in fam if not cover.is_tight(m, "A")]
    m = loose[0]
    arcs, labels = cover.build_arc_system(m)
    cov = cover.expand_cover(m, labels, W=4)
    with pytest.raises(cover.CoverError):
        cover.busemann_field(cov, "A")


# -- pair distances and latitudes --------------------------------------

def test_star_pair_distance_and_latitudes():
    m = star_map()
    arcs, labels = cover.build_arc_system(m)
    cov = cover.expand_cover(m, labels, W=5)
    dab, lat = cover.pair_distance_and_latitudes(cov, "A", "B")
    assert dab == 2
    assert sorted(lat) == [0, 1, 2]
    # the middle latitude is a single lift of the center vertex
    middle = [cov.nodes[i] for i in lat[1]]
    assert len(middle) == 1 and middle[0][0] == "r"


def test_path_pair_distance():
    m = two_edge_path()
    arcs, labels = cover.build_arc_system(m)
    cov = cover.expand_cover(m, labels, W=5)
    dab, lat = cover.pair_distance_and_latitudes(cov, "A", "B")
    assert dab == 2
    # every middle-latitude node is a lift of the marked middle vertex
    assert all(cov.nodes[i][0] == "i" and cov.nodes[i][1] == "C"
               for i in lat[1])


def test_theta_pair_distances_vanish_or_one():
    m = theta_map()
    arcs, labels = cover.build_arc_system(m)
    cov = cover.expand_cover(m, labels, W=6)
    fields = {lab: cover.busemann_field(cov, lab) for lab in "ABC"}
    for x, y in (("A", "B"), ("B", "C"), ("C", "A")):
        d, lat = cover.pair_distance_and_latitudes(cov, x, y,
                                                   fields[x], fields[y])
        assert d in (0, 1)
        for r, nodes in lat.items():
            assert nodes

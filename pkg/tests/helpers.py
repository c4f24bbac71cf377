"""Shared builders for tests: small maps constructed independently of
the library's own surgery code."""

from pantograph.mapcore import PlanarMap, BoundaryRef


def map_from_rotations(rot, outer):
    """Build a map from counterclockwise neighbor lists.

    ``rot`` maps each vertex name to the ccw-ordered list of its
    neighbors (simple graphs only).  ``outer`` is an ordered pair
    (u, v): the boundary face is the one on the right of the dart
    u -> v.  Returns (map, dart) where ``dart`` maps ordered vertex
    pairs to dart ids.
    """
    dart = {}
    for u in rot:
        for v in rot[u]:
            dart[(u, v)] = len(dart)
    n = len(dart)
    alpha = [0] * n
    sigma = [0] * n
    for (u, v), d in dart.items():
        alpha[d] = dart[(v, u)]
    for u, nbrs in rot.items():
        k = len(nbrs)
        for i, v in enumerate(nbrs):
            sigma[dart[(u, v)]] = dart[(u, nbrs[(i + 1) % k])]
    m = PlanarMap(alpha, sigma,
                  {"outer": BoundaryRef("face", dart[outer])})
    return m, dart


def path_map(length):
    """A path of ``length`` edges, vertices 0..length."""
    rot = {0: [1], length: [length - 1]}
    for i in range(1, length):
        rot[i] = [i + 1, i - 1]
    return map_from_rotations(rot, (0, 1))


def quad_map():
    """A single quadrangle A-B-C-D with the outer face marked so the
    contour runs A, B, C, D."""
    rot = {"A": ["B", "D"], "B": ["C", "A"],
           "C": ["D", "B"], "D": ["A", "C"]}
    return map_from_rotations(rot, ("A", "B"))


def hexgrid_map():
    """Two quadrangles side by side: outer contour a, b, c, d, e, f
    with an inner edge b-e.

        f --- e --- d
        |     |     |
        a --- b --- c
    """
    rot = {"a": ["b", "f"], "b": ["c", "e", "a"], "c": ["d", "b"],
           "d": ["e", "c"], "e": ["d", "f", "b"], "f": ["a", "e"]}
    return map_from_rotations(rot, ("a", "b"))

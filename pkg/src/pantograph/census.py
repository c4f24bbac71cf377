"""Exhaustive generation of small maps and marked pieces.

Maps with a prescribed multiset of face degrees are generated by sewing
polygons: starting from one polygon, repeatedly glue the first open
side either to another side of the same hole (splitting the hole) or
to a side of a fresh polygon.  Gluing across different holes would add
a handle, so the discipline keeps the genus at zero by construction;
every output is still validated.  Labeled boundaries are then assigned
in all inequivalent ways, and everything is deduplicated by canonical
code, making the census deterministic and order-independent.
"""

from itertools import combinations_with_replacement

from .mapcore import PlanarMap, BoundaryRef
from .series import TruncSeries, QUAD, GENERAL
from . import geodesy


class CensusError(RuntimeError):
    pass


# -- polygon sewing ---------------------------------------------------

def _state_code(alpha, holes, unused, nxt):
    """Canonical code of a partial complex.  The complex becomes a map:
    each open side gets a virtual partner dart, holes become faces of
    virtual darts, and virtual darts are flagged through zero_length so
    the code separates holes from finished polygons."""
    open_sides = [s for h in holes for s in h]
    darts = sorted(alpha) + open_sides
    new = {}
    for d in darts:
        new[d] = len(new)
    virt = {}
    for s in open_sides:
        virt[s] = len(new) + len(virt)
    n = len(new) + len(virt)
    a = [0] * n
    phi = [0] * n
    for d, w in alpha.items():
        a[new[d]] = new[w]
    for s in open_sides:
        a[new[s]] = virt[s]
        a[virt[s]] = new[s]
    # phi: polygon order on real darts, hole order on virtual darts
    for d in darts:
        phi[new[d]] = new[nxt[d]]
    for h in holes:
        for i, s in enumerate(h):
            phi[virt[s]] = virt[h[(i + 1) % len(h)]]
    sigma = [phi[a[d]] for d in range(n)]
    m = PlanarMap(a, sigma, {}, zero_length=virt.values())
    return (tuple(sorted(unused)), m.canonical_code())


def polygon_gluings(degrees, cap=2_000_000):
    """All connected genus-0 maps whose face degrees form exactly the
    given multiset.  Returned maps carry no boundaries; faces come out
    as the polygon contours.

    Breadth-first over the number of sewn edges, with canonical
    deduplication of partial complexes at every level; isomorphic
    partial states have isomorphic completions, so pruning them keeps
    the search complete while avoiding duplicated subtrees.
    """
    degrees = sorted(degrees, reverse=True)
    if not degrees:
        return []
    bases = []
    total = 0
    for d in degrees:
        bases.append(total)
        total += d
    sides = [list(range(b, b + d)) for b, d in zip(bases, degrees)]
    nxt = {}
    for poly in sides:
        for i, s in enumerate(poly):
            nxt[s] = poly[(i + 1) % len(poly)]
    out = {}
    steps = 0

    def finish(alpha):
        a = [alpha[d] for d in range(total)]
        sigma = [nxt[alpha[d]] for d in range(total)]
        m = PlanarMap(a, sigma, {})
        if m.malformed or not m.n:
            return
        if m.num_vertices - m.num_edges + m.num_faces != 2:
            return
        if not m._connected():
            return
        out[m.canonical_code()] = m

    # start from one polygon of the largest degree; every map has one
    start = ({}, [list(sides[0])], tuple(degrees[1:]))
    level = {_state_code({}, start[1], start[2], nxt): start}
    while level:
        nxt_level = {}
        for alpha, holes, unused in level.values():
            steps += 1
            if steps > cap:
                raise CensusError("polygon sewing exceeded %d states" % cap)
            if not holes:
                if not unused:
                    finish(alpha)
                continue
            # a hole of odd length needs an odd polygon to close, and
            # each odd polygon can fix at most one odd hole
            odd_holes = sum(1 for h in holes if len(h) % 2)
            if odd_holes > sum(1 for d in unused if d % 2):
                continue
            # fail-first: work on the smallest hole
            hi = min(range(len(holes)), key=lambda i: len(holes[i]))
            hole = holes[hi]
            others = holes[:hi] + holes[hi + 1:]
            u = hole[0]

            def push(alpha2, holes2, unused2):
                key = _state_code(alpha2, holes2, unused2, nxt)
                if key not in nxt_level:
                    nxt_level[key] = (alpha2, holes2, unused2)

            # glue u to another side of the same hole
            for j in range(1, len(hole)):
                w = hole[j]
                h1, h2 = hole[1:j], hole[j + 1:]
                alpha2 = dict(alpha)
                alpha2[u] = w
                alpha2[w] = u
                push(alpha2, [h for h in (h1, h2) if h] + others, unused)
            # or attach a fresh polygon of each remaining degree
            for d in sorted(set(unused)):
                left = list(unused)
                left.remove(d)
                poly = _fresh_polygon(sides, degrees, alpha, holes, d)
                if poly is None:
                    continue
                for j in range(d):
                    w = poly[j]
                    merged = poly[j + 1:] + poly[:j] + hole[1:]
                    alpha2 = dict(alpha)
                    alpha2[u] = w
                    alpha2[w] = u
                    push(alpha2, [merged] + others, tuple(left))
        level = nxt_level
    return [out[k] for k in sorted(out)]


def _fresh_polygon(sides, degrees, alpha, holes, d):
    """First polygon of degree d whose sides are untouched so far."""
    busy = set(alpha)
    for h in holes:
        busy.update(h)
    for poly, deg in zip(sides, degrees):
        if deg == d and poly[0] not in busy:
            return poly
    return None


def rooted_count(maps):
    """Total number of rootings (distinct dart-rooted codes) over a
    list of maps; cross-checks against known rooted enumeration."""
    total = 0
    for m in maps:
        total += len({m._code_from(s) for s in range(m.n)})
    return total


# -- boundary assignment ----------------------------------------------

def _face_degree_multisets(boundary_lengths, inner_degrees, num_inner):
    """The face-degree multiset for given boundary contour lengths
    (0 = boundary-vertex) and a number of inner faces per degree."""
    out = [d for d in boundary_lengths.values() if d > 0]
    for deg, count in num_inner:
        out.extend([deg] * count)
    return sorted(out, reverse=True)


def attach_boundaries(m, boundary_lengths, inner_degrees):
    """All inequivalent ways to label boundaries on ``m``.

    ``boundary_lengths`` maps labels to contour degrees; degree 0 means
    a boundary-vertex.  Faces not chosen as boundaries must all have a
    degree in ``inner_degrees``.  Returns deduplicated labeled maps.
    """
    face_labels = sorted(lab for lab, d in boundary_lengths.items() if d > 0)
    vertex_labels = sorted(lab for lab, d in boundary_lengths.items()
                           if d == 0)
    faces = m.face_contours()
    out = {}

    results = []

    def assign_faces(idx, used):
        if idx == len(face_labels):
            rest = [i for i in range(len(faces)) if i not in used]
            if all(sum(1 for d in faces[i] if d not in m.zero_length)
                   in inner_degrees for i in rest):
                assign_vertices(0, used, {})
            return
        lab = face_labels[idx]
        want = boundary_lengths[lab]
        for i in range(len(faces)):
            if i in used:
                continue
            if sum(1 for d in faces[i] if d not in m.zero_length) != want:
                continue
            used2 = dict(used)
            used2[i] = lab
            assign_faces(idx + 1, used2)

    def assign_vertices(idx, face_used, vert_used):
        if idx == len(vertex_labels):
            bnd = {}
            for i, lab in face_used.items():
                bnd[lab] = BoundaryRef("face", faces[i][0])
            for v, lab in vert_used.items():
                bnd[lab] = BoundaryRef("vertex",
                                       m.vertex_darts(v)[0] if m.n else None)
            results.append(PlanarMap(m.alpha, m.sigma, bnd, m.zero_length))
            return
        lab = vertex_labels[idx]
        for v in range(m.num_vertices):
            if v in vert_used:
                continue
            vert_used2 = dict(vert_used)
            vert_used2[v] = lab
            assign_vertices(idx + 1, face_used, vert_used2)

    if m.n == 0:
        if not face_labels and len(vertex_labels) == 1:
            results.append(PlanarMap([], [], {
                vertex_labels[0]: BoundaryRef("vertex", None)}))
    else:
        assign_faces(0, {})
    for lm in results:
        if lm.validate():
            continue
        out[lm.canonical_code()] = lm
    return [out[k] for k in sorted(out)]


def enumerate_bounded_maps(boundary_lengths, max_inner_faces,
                           inner_degrees=(4,), keep=None):
    """All maps with the given labeled boundary contour degrees (0 =
    boundary-vertex) and at most ``max_inner_faces`` inner faces of
    allowed degrees.  ``keep`` optionally filters labeled maps (e.g. a
    tightness test).  Complete and duplicate-free."""
    out = {}
    for counts in _inner_count_tuples(inner_degrees, max_inner_faces):
        degs = _face_degree_multisets(boundary_lengths, inner_degrees,
                                      list(zip(inner_degrees, counts)))
        if not degs:
            # vertex-map candidate: only if all boundaries are vertices
            # and they all land on the single vertex -- impossible for
            # more than one label
            if sum(1 for d in boundary_lengths.values() if d == 0) == 1 \
                    and len(boundary_lengths) == 1:
                vm = PlanarMap([], [], {
                    next(iter(boundary_lengths)): BoundaryRef("vertex", None)})
                out[vm.canonical_code()] = vm
            continue
        for m in polygon_gluings(degs):
            for lm in attach_boundaries(m, boundary_lengths, inner_degrees):
                if keep is not None and not keep(lm):
                    continue
                out[lm.canonical_code()] = lm
    return [out[k] for k in sorted(out)]


def _inner_count_tuples(inner_degrees, max_total):
    """All tuples of per-degree inner face counts with bounded total."""
    def rec(i, left):
        if i == len(inner_degrees):
            yield ()
            return
        for c in range(left + 1):
            for rest in rec(i + 1, left - c):
                yield (c,) + rest
    return rec(0, max_total)


# -- piece enumeration ------------------------------------------------

def enumerate_pieces(kind, max_inner_faces, boundary_degrees,
                     inner_degrees=(4,), predicate=None,
                     include_vertex_piece=True):
    """All valid marked pieces of the given kind with at most
    ``max_inner_faces`` inner faces and outer contour degree drawn from
    ``boundary_degrees``.  ``predicate`` filters on the validation
    metadata (width, exceedance, sides...).

    The caller is responsible for ``boundary_degrees`` covering every
    piece in scope; pass a sentinel extra degree and check emptiness to
    certify the cut-off.
    """
    names = geodesy.MARK_NAMES[kind]
    out = {}
    if include_vertex_piece:
        p = geodesy.MarkedPiece.vertex_piece(kind)
        res = geodesy.validate_piece(p)
        if not res["violations"] and (predicate is None or predicate(res)):
            out[p.canonical_code()] = p
    for counts in _inner_count_tuples(inner_degrees, max_inner_faces):
        inner = [d for d, c in zip(inner_degrees, counts) for _ in range(c)]
        for p_deg in sorted(set(boundary_degrees)):
            degs = sorted(inner + [p_deg], reverse=True)
            for m in polygon_gluings(degs):
                for lm in attach_boundaries(m, {"outer": p_deg},
                                            inner_degrees):
                    for piece in _mark_piece(lm, kind, names):
                        res = geodesy.validate_piece(piece)
                        if res["violations"]:
                            continue
                        if predicate is not None and not predicate(res):
                            continue
                        out[piece.canonical_code()] = piece
    return [out[k] for k in sorted(out)]


def _mark_piece(lm, kind, names):
    contour = geodesy.boundary_contour(lm)
    p = len(contour)
    for i0 in range(p):
        # offset p wraps back to the first mark; the cyclic-order rule
        # of MarkedPiece.arcs then reads it as a full turn
        for offs in combinations_with_replacement(range(p + 1),
                                                  len(names) - 1):
            marks = {names[0]: contour[i0]}
            for name, o in zip(names[1:], offs):
                marks[name] = contour[(i0 + o) % p]
            yield geodesy.MarkedPiece(lm, kind, marks)


# -- weighted polynomials ---------------------------------------------

def _weighted_vertices_map(m):
    vertex_bnd = sum(1 for ref in m.boundaries.values()
                     if ref.kind == "vertex")
    return m.num_vertices - vertex_bnd


def weighted_polynomial(items, weighting, order, degrees=QUAD):
    """Sum of t^(weighted vertices) * prod g_deg over inner faces.

    ``weighting`` is one of pants, annulus (labeled maps: every vertex
    that is not a boundary-vertex weighs t) or slice, diangle, triangle
    (pieces: the weighted-vertex count of validate_piece).
    """
    if weighting not in ("pants", "annulus", "slice", "diangle", "triangle"):
        raise CensusError("unknown weighting %r" % (weighting,))
    acc = TruncSeries.zero(order, degrees)
    for item in items:
        if weighting in ("pants", "annulus"):
            m = item
            w = _weighted_vertices_map(m)
        else:
            m = item.map
            res = geodesy.validate_piece(item)
            if res["violations"]:
                raise CensusError("invalid piece in weighted sum")
            w = res["weighted_vertices"]
        term = TruncSeries.t_power(order, degrees, w)
        for f in m.inner_faces():
            deg = m.face_degree(f)
            term = term * TruncSeries.g_var(order, degrees, deg)
        acc = acc + term
    return acc

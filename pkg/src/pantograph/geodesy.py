"""Distance geometry on maps with one boundary face.

This module provides graph distances and geodesic counting, boundary
intervals and their classification, leftmost (bi)geodesics, and the
three families of marked pieces: tight slices, diangles and triangles.
Pieces are validated against their defining axioms and can be cut into
smaller pieces (and glued back) along leftmost geodesics.

Conventions (see mapcore): the boundary face's contour walks
counterclockwise around the map with the boundary face on the right;
a corner is identified with the contour dart it precedes.  Marked
corners cut the contour into arcs; an interval [x, y] between two
marks means the concatenation of the arcs from x to y in the cyclic
mark order, so coincident marks delimit empty intervals.
"""

import json
from collections import deque

from .mapcore import PlanarMap, BoundaryRef
from . import surgery


class GeodesyError(ValueError):
    """Raised on precondition failures; ``reason`` is a stable slug."""

    def __init__(self, reason, message=None):
        super().__init__(message or reason)
        self.reason = reason


# -- distances and geodesic counting ----------------------------------

def distances(m, sources):
    """Distances from a set of source vertices, zero-length edges
    contributing 0 (deque-based 0/1 search)."""
    sources = list(sources)
    if not sources:
        raise GeodesyError("empty-sources", "no source vertices given")
    dist = [None] * m.num_vertices
    dq = deque()
    for v in sources:
        if dist[v] != 0:
            dist[v] = 0
            dq.append(v)
    while dq:
        v = dq.popleft()
        for d in m.vertex_darts(v):
            u = m.vertex_of[m.alpha[d]]
            w = m.edge_length(d)
            if dist[u] is None or dist[v] + w < dist[u]:
                dist[u] = dist[v] + w
                if w == 0:
                    dq.appendleft(u)
                else:
                    dq.append(u)
    return dist


def count_geodesics(m, v1, v2, dist=None):
    """Number of geodesics from v1 to v2, counting parallel edges
    separately.  Requires a map without zero-length edges (the count
    is ill-defined otherwise)."""
    if m.zero_length:
        raise GeodesyError("zero-length-edges",
                           "geodesic counting needs unit-length edges")
    if dist is None:
        dist = distances(m, [v1])
    if dist[v2] is None:
        return 0
    counts = {v1: 1}
    order = sorted((d, v) for v, d in enumerate(dist)
                   if d is not None and d <= dist[v2])
    for d, v in order:
        if v == v1:
            continue
        total = 0
        for dd in m.vertex_darts(v):
            u = m.vertex_of[m.alpha[dd]]
            if dist[u] == d - 1:
                total += counts.get(u, 0)
        counts[v] = total
    return counts.get(v2, 0)


# -- boundary contours and intervals ----------------------------------

def boundary_contour(m, label=None):
    """The contour of the (unique, or named) boundary face."""
    labels = [label] if label is not None else sorted(m.boundaries)
    for lab in labels:
        ref = m.boundaries[lab]
        if ref.kind == "face" and ref.dart is not None:
            return m.face_contours()[m.face_of[ref.dart]]
    raise GeodesyError("no-boundary-face",
                       "map has no boundary of kind face")


def _walk_between(m, contour, c, cp):
    """Darts of the contour from corner c up to (excluding) corner cp;
    empty when c == cp."""
    if c not in contour or cp not in contour:
        raise GeodesyError("corner-not-on-boundary",
                           "corner dart is not on the boundary contour")
    i = contour.index(c)
    j = contour.index(cp)
    k = len(contour)
    return [contour[(i + t) % k] for t in range((j - i) % k)]


def interval_darts(m, c, cp):
    """The boundary interval [c, cp] as a dart list (two-corner form,
    empty when the corners coincide)."""
    return _walk_between(m, boundary_contour(m), c, cp)


def interval_length(m, darts):
    return sum(1 for d in darts if d not in m.zero_length)


def walk_vertices(m, darts, start_vertex=None):
    """Vertices visited by a dart walk, endpoints included."""
    if not darts:
        return [start_vertex] if start_vertex is not None else []
    out = [m.vertex_of[darts[0]]]
    for d in darts:
        out.append(m.vertex_of[m.alpha[d]])
    return out


def classify_interval(m, c, cp):
    """One of 'not-geodesic', 'geodesic', 'strictly-geodesic' for the
    boundary interval [c, cp]."""
    darts = interval_darts(m, c, cp)
    v1 = m.vertex_of[c]
    v2 = m.vertex_of[cp]
    dist = distances(m, [v1])
    if interval_length(m, darts) != dist[v2]:
        return "not-geodesic"
    if count_geodesics(m, v1, v2, dist) == 1:
        return "strictly-geodesic"
    return "geodesic"


# -- leftmost geodesics -----------------------------------------------

def _leftmost_step(m, r, dist):
    """First dart at the base of r, scanning clockwise starting just
    clockwise of r, that leads to a vertex strictly closer according
    to ``dist``.  Returns None if no dart descends."""
    v = m.vertex_of[r]
    inv = {m.sigma[d]: d for d in m.vertex_darts(v)}
    d = inv[r]
    while d != r:
        u = m.vertex_of[m.alpha[d]]
        if m.edge_length(d) == 1 and dist[u] == dist[v] - 1:
            return d
        d = inv[d]
    return None


def leftmost_descent(m, first, dist):
    """Leftmost geodesic starting with dart ``first`` and descending
    ``dist`` to zero; returns the dart list."""
    path = [first]
    while True:
        v = m.vertex_of[m.alpha[path[-1]]]
        if dist[v] == 0:
            return path
        nxt = _leftmost_step(m, m.alpha[path[-1]], dist)
        if nxt is None:
            raise GeodesyError("descent-stuck",
                               "no descending edge at vertex %d" % v)
        path.append(nxt)


def launch_darts(m, v, dist1, dist2):
    """The pair (e1, e2) of launch darts at v for the leftmost
    bigeodesic: turning clockwise around v, all darts leading strictly
    closer to the first source appear between e1 and e2, all those
    leading strictly closer to the second source between e2 and e1."""
    darts = m.vertex_darts(v)
    inv = {m.sigma[d]: d for d in darts}
    # clockwise order starting anywhere
    cw = [darts[0]]
    while len(cw) < len(darts):
        cw.append(inv[cw[-1]])

    def typ(d):
        if m.edge_length(d) == 0:
            return 0
        u = m.vertex_of[m.alpha[d]]
        c1 = dist1[u] < dist1[v]
        c2 = dist2[u] < dist2[v]
        if c1 and c2:
            raise GeodesyError("not-a-geodesic-vertex",
                               "edge at %d descends to both sources" % v)
        return 1 if c1 else (2 if c2 else 0)

    typed = [(d, typ(d)) for d in cw]
    typed = [(d, t) for d, t in typed if t]
    if not any(t == 1 for _, t in typed) or not any(t == 2 for _, t in typed):
        raise GeodesyError("not-a-geodesic-vertex",
                           "no descending edge toward a source at %d" % v)
    e1 = [d for i, (d, t) in enumerate(typed)
          if t == 1 and typed[i - 1][1] == 2]
    e2 = [d for i, (d, t) in enumerate(typed)
          if t == 2 and typed[i - 1][1] == 1]
    if len(e1) != 1 or len(e2) != 1:
        raise GeodesyError("interleaved-types",
                           "descent types interleave around vertex %d" % v)
    return e1[0], e2[0]


def leftmost_bigeodesic(m, v, v1, v2):
    """The leftmost bigeodesic launched from v towards v1 and v2.

    Returns (darts, i) where ``darts`` traverse the path from v1 to
    v2 and ``i`` is the position of v along it.  Raises GeodesyError
    with reasons 'endpoints-too-close', 'launch-at-endpoint' or
    'not-a-geodesic-vertex' on precondition failures.
    """
    dist1 = distances(m, [v1])
    dist2 = distances(m, [v2])
    if dist1[v2] < 2:
        raise GeodesyError("endpoints-too-close",
                           "d(v1,v2) must be at least 2")
    if v == v1 or v == v2:
        raise GeodesyError("launch-at-endpoint",
                           "launch vertex coincides with an endpoint")
    if dist1[v] + dist2[v] != dist1[v2]:
        raise GeodesyError("not-a-geodesic-vertex",
                           "launch vertex lies on no geodesic")
    e1, e2 = launch_darts(m, v, dist1, dist2)
    part1 = leftmost_descent(m, e1, dist1)
    part2 = leftmost_descent(m, e2, dist2)
    darts = [m.alpha[d] for d in reversed(part1)] + part2
    return darts, len(part1)


# -- marked pieces ----------------------------------------------------

MARK_NAMES = {
    "slice": ("c", "cp", "cpp"),
    "diangle": ("c1", "c12", "c2", "c21"),
    "triangle": ("c1", "c12", "c2", "c23", "c3", "c31"),
}

# intervals whose strictness defines the red coloring, per kind,
# expressed as (from_mark, to_mark) pairs in the cyclic mark order
RED_INTERVALS = {
    "slice": (("cpp", "c"),),
    "diangle": (("c12", "c2"), ("c21", "c1")),
    "triangle": (("c12", "c2"), ("c23", "c3"), ("c31", "c1")),
}


class MarkedPiece:
    """A one-boundary map with named marked corners (a tight slice, a
    diangle or a triangle)."""

    def __init__(self, m, kind, marks):
        if kind not in MARK_NAMES:
            raise ValueError("unknown piece kind %r" % (kind,))
        self.map = m
        self.kind = kind
        names = MARK_NAMES[kind]
        if m.n == 0:
            self.marks = {name: None for name in names}
        else:
            if sorted(marks) != sorted(names):
                raise ValueError("marks must be exactly %s" % (names,))
            self.marks = {name: marks[name] for name in names}

    @classmethod
    def vertex_piece(cls, kind, label="outer"):
        from .mapcore import vertex_map
        return cls(vertex_map(label), kind, {})

    def is_vertex_piece(self):
        return self.map.n == 0

    def mark_vertex(self, name):
        return self.map.vertex_of[self.marks[name]]

    def arcs(self):
        """Per mark name, the contour arc from that mark to the next
        one in cyclic order."""
        names = MARK_NAMES[self.kind]
        if self.is_vertex_piece():
            return {name: [] for name in names}
        contour = boundary_contour(self.map)
        k = len(contour)
        base = contour.index(self.marks[names[0]])
        pos = []
        cur = 0
        for name in names:
            d = self.marks[name]
            if d not in contour:
                raise GeodesyError("corner-not-on-boundary",
                                   "mark %s is not a boundary corner" % name)
            raw = (contour.index(d) - base) % k
            if raw >= cur:
                cur = raw
            elif raw == 0:
                cur = k      # wrapped all the way back to the first mark
            else:
                raise GeodesyError("marks-out-of-order",
                                   "marks are not in counterclockwise order")
            pos.append(cur)
        out = {}
        for i, name in enumerate(names):
            j = pos[i + 1] if i + 1 < len(pos) else k
            out[name] = [contour[(base + t) % k] for t in range(pos[i], j)]
        return out

    def interval(self, from_name, to_name, arcs=None):
        """Concatenated arcs from one mark to another (cyclically)."""
        names = MARK_NAMES[self.kind]
        arcs = self.arcs() if arcs is None else arcs
        i = names.index(from_name)
        out = []
        while names[i] != to_name:
            out.extend(arcs[names[i]])
            i = (i + 1) % len(names)
        return out

    def colors(self):
        """Boundary edge coloring: 'red' on intervals required to be
        strictly geodesic, 'blue' elsewhere (zero-length darts are
        never colored)."""
        arcs = self.arcs()
        red = set()
        for a, b in RED_INTERVALS[self.kind]:
            red.update(self.interval(a, b, arcs))
        out = {}
        for d in boundary_contour(self.map) if not self.is_vertex_piece() else []:
            if d in self.map.zero_length:
                continue
            out[d] = "red" if d in red else "blue"
        return out

    # -- serialization ------------------------------------------------

    def to_json(self):
        return {"map": self.map.to_json(), "kind": self.kind,
                "marks": dict(self.marks)}

    @classmethod
    def from_json(cls, obj):
        m = PlanarMap.from_json(obj["map"])
        marks = {k: v for k, v in obj["marks"].items() if v is not None}
        return cls(m, obj["kind"], marks)

    def dumps(self):
        return json.dumps(self.to_json())

    @classmethod
    def loads(cls, text):
        return cls.from_json(json.loads(text))

    def canonical_code(self):
        """Canonical under orientation-preserving isomorphism
        respecting kind and marks."""
        if self.is_vertex_piece():
            inner = self.map.canonical_code().decode()
        else:
            bnd = dict(self.map.boundaries)
            for name in MARK_NAMES[self.kind]:
                d = self.marks[name]
                bnd["mark:" + name] = BoundaryRef("face", d, d)
            marked = PlanarMap(self.map.alpha, self.map.sigma, bnd,
                               self.map.zero_length)
            inner = marked.canonical_code().decode()
        return json.dumps([self.kind, inner]).encode()

    def __repr__(self):
        return "MarkedPiece(%s, n=%d)" % (self.kind, self.map.n)


# -- validation -------------------------------------------------------

def _geodesic_status(m, darts, v_from, v_to):
    dist = distances(m, [v_from])
    if interval_length(m, darts) != dist[v_to]:
        return "not-geodesic"
    if count_geodesics(m, v_from, v_to, dist) == 1:
        return "strictly-geodesic"
    return "geodesic"


def validate_piece(p):
    """Check the defining axioms of a marked piece.

    Returns a dict with 'violations' (empty when valid) and, for valid
    pieces, metadata: 'width' (slice), 'exceedance' (diangle), 'sides'
    (triangle), plus 'weighted_vertices' (count of t-weighted
    vertices) and 'inner_face_degrees'.
    """
    m = p.map
    out = {"kind": p.kind, "violations": []}
    bad = out["violations"].append
    if p.is_vertex_piece():
        if p.kind == "slice":
            out["width"] = 0
            out["weighted_vertices"] = 0
        elif p.kind == "diangle":
            out["exceedance"] = 0
            out["weighted_vertices"] = 1
        else:
            out["sides"] = (0, 0, 0)
            out["weighted_vertices"] = 1
        out["inner_face_degrees"] = []
        return out

    diags = m.validate()
    if diags:
        out["violations"] = ["map: " + d for d in diags]
        return out
    faces = [lab for lab, ref in m.boundaries.items() if ref.kind == "face"]
    if len(m.boundaries) != 1 or len(faces) != 1:
        bad("piece must have exactly one boundary face")
        return out
    if m.zero_length:
        bad("piece has zero-length edges")
        return out
    inner_degrees = sorted(m.face_degree(f) for f in m.inner_faces())
    if any(deg % 2 for deg in inner_degrees):
        bad("inner face of odd degree (map not bipartite)")
        return out
    out["inner_face_degrees"] = inner_degrees

    names = MARK_NAMES[p.kind]
    if any(p.marks[name] is None for name in names):
        bad("missing marks")
        return out
    try:
        arcs = p.arcs()
    except GeodesyError as exc:
        bad(exc.reason)
        return out

    def vx(name):
        return p.mark_vertex(name)

    def iv(a, b):
        return p.interval(a, b, arcs)

    def verts(darts, start):
        return walk_vertices(m, darts, start)

    def require(a, b, want):
        darts = iv(a, b)
        got = _geodesic_status(m, darts, vx(a), vx(b))
        ok = (got != "not-geodesic") if want == "geodesic" else (got == want)
        if not ok:
            bad("[%s,%s] is %s, not %s" % (a, b, got, want))
        return darts

    def meet_only_at(a_darts, a_start, b_darts, b_start, vertex, label):
        va = set(verts(a_darts, a_start))
        vb = set(verts(b_darts, b_start))
        if va & vb != {vertex}:
            bad("%s share %s" % (label, sorted(va & vb)))

    if p.kind == "slice":
        require("c", "cp", "geodesic")
        require("cp", "c", "geodesic")
        right = require("cpp", "c", "strictly-geodesic")
        left = iv("c", "cp")
        meet_only_at(right, vx("cpp"), left, vx("c"), vx("c"),
                     "[cpp,c] and [c,cp]")
        out["width"] = interval_length(m, arcs["cp"])
        on_right = set(verts(right, vx("cpp")))
        out["weighted_vertices"] = m.num_vertices - len(on_right)
    elif p.kind == "diangle":
        require("c1", "c2", "geodesic")
        require("c2", "c1", "geodesic")
        r12 = require("c12", "c2", "strictly-geodesic")
        r21 = require("c21", "c1", "strictly-geodesic")
        meet_only_at(r21, vx("c21"), iv("c1", "c2"), vx("c1"), vx("c1"),
                     "[c21,c1] and [c1,c2]")
        meet_only_at(r12, vx("c12"), iv("c2", "c1"), vx("c2"), vx("c2"),
                     "[c12,c2] and [c2,c1]")
        e = interval_length(m, arcs["c1"]) - interval_length(m, arcs["c21"])
        e_check = interval_length(m, arcs["c2"]) - interval_length(m, arcs["c12"])
        if e != e_check:
            bad("inconsistent exceedance")
        if e < 0:
            bad("negative-exceedance")
        out["exceedance"] = e
        unweighted = (set(verts(r12, vx("c12"))) | set(verts(r21, vx("c21")))) \
            - {vx("c12"), vx("c21")}
        out["weighted_vertices"] = m.num_vertices - len(unweighted)
    else:
        if len({p.marks[name] for name in names}) < len(names):
            bad("coincident corners on a triangle that is not the vertex-map")
            return out
        pairs = [("c1", "c2"), ("c2", "c3"), ("c3", "c1")]
        sides = {}
        for a, b in pairs:
            require(a, b, "geodesic")
        for a, b in (("c12", "c2"), ("c23", "c3"), ("c31", "c1")):
            require(a, b, "strictly-geodesic")
        for (a, b), (bb, cc) in zip(pairs, pairs[1:] + pairs[:1]):
            da, db = iv(a, b), iv(bb, cc)
            va = set(verts(da, vx(a)))
            vb = set(verts(db, vx(bb)))
            if va & vb != {vx(b)}:
                bad("[%s,%s] and [%s,%s] share %s"
                    % (a, b, bb, cc, sorted(va & vb)))
        s1 = interval_length(m, arcs["c1"])
        s2 = interval_length(m, arcs["c2"])
        s3 = interval_length(m, arcs["c3"])
        if interval_length(m, arcs["c31"]) != s1:
            bad("len[c31,c1] differs from len[c1,c12]")
        if interval_length(m, arcs["c12"]) != s2:
            bad("len[c12,c2] differs from len[c2,c23]")
        if interval_length(m, arcs["c23"]) != s3:
            bad("len[c23,c3] differs from len[c3,c31]")
        out["sides"] = (s1, s2, s3)
        # every geodesic between consecutive apices must pass through
        # the intermediate marked vertex
        for (a, b), w in zip(pairs, ("c12", "c23", "c31")):
            if out["violations"]:
                break
            total = count_geodesics(m, vx(a), vx(b))
            via = (count_geodesics(m, vx(a), vx(w))
                   * count_geodesics(m, vx(w), vx(b)))
            if total != via:
                bad("a geodesic from %s to %s avoids %s" % (a, b, w))
        unweighted = set()
        for a, b in (("c12", "c2"), ("c23", "c3"), ("c31", "c1")):
            unweighted |= set(verts(iv(a, b), vx(a)))
        unweighted -= {vx("c12"), vx("c23"), vx("c31")}
        out["weighted_vertices"] = m.num_vertices - len(unweighted)
    return out


# -- cutting and gluing -----------------------------------------------

def _descend_with_stops(p, arrival, dist, stops):
    """Leftmost descent for ``dist`` starting from the endpoint of the
    traversed dart ``arrival``, truncated at the first vertex belonging
    to ``stops`` (the start vertex included).  Returns the dart list
    (possibly empty)."""
    m = p.map
    path = []
    r = m.alpha[arrival]
    while True:
        v = m.vertex_of[r]
        if v in stops:
            return path
        nxt = _leftmost_step(m, r, dist)
        if nxt is None:
            raise GeodesyError("descent-stuck",
                               "no descending edge at vertex %d" % v)
        path.append(nxt)
        r = m.alpha[nxt]


def _rev(m, darts):
    return [m.alpha[d] for d in reversed(darts)]


def _make_piece(m, contour, kind, mark_darts):
    """Extract the region left of ``contour`` and mark it; mark values
    are old darts that must lie on the contour."""
    piece, new = surgery.extract_piece(m, contour)
    return MarkedPiece(piece, kind,
                       {name: new[d] for name, d in mark_darts.items()})


def decompose_slice(p):
    """Cut a tight slice of width w into w elementary slices by
    peeling leftmost geodesics launched from the interior vertices of
    the width interval.  Width 0 yields the empty sequence."""
    res = validate_piece(p)
    if res["violations"]:
        raise GeodesyError("invalid-piece",
                           "; ".join(res["violations"]))
    pieces = []
    cur = p
    width = res["width"]
    while width > 1:
        cur, elem = _peel_slice(cur)
        pieces.append(elem)
        width -= 1
    if width == 1:
        pieces.append(cur)
    return pieces


def _peel_slice(p):
    """Split a slice of width w >= 2 into (remainder of width w-1,
    leftmost elementary slice)."""
    m = p.map
    arcs = p.arcs()
    a1, top, a3 = arcs["c"], arcs["cp"], arcs["cpp"]
    v = p.mark_vertex("c")
    dv = distances(m, [v])
    t0 = top[0]
    left_set = set(walk_vertices(m, a1, v))
    right_set = set(walk_vertices(m, a3, p.mark_vertex("cpp")))
    gamma = _descend_with_stops(p, t0, dv, left_set | right_set)
    x = m.vertex_of[m.alpha[gamma[-1]]] if gamma else m.vertex_of[m.alpha[t0]]
    if x in left_set:
        ix = dv[x]
        if ix < len(a1):
            elem_marks = {"c": a1[ix], "cp": t0,
                          "cpp": gamma[0] if gamma else a1[ix]}
        else:
            elem_marks = {"c": gamma[0], "cp": t0, "cpp": gamma[0]}
        elem_contour = a1[ix:] + [t0] + gamma
        rem_contour = a1[:ix] + _rev(m, gamma) + top[1:] + a3
        rem_cpp = a3[0] if a3 else rem_contour[0]
    else:
        iy = len(a3) - dv[x]
        elem_marks = {"c": a1[0], "cp": t0,
                      "cpp": gamma[0] if gamma else a3[iy]}
        elem_contour = a3[iy:] + a1 + [t0] + gamma
        rem_contour = _rev(m, gamma) + top[1:] + a3[:iy]
        rem_cpp = a3[0] if iy else rem_contour[0]
    rem_marks = {"c": rem_contour[0], "cp": top[1], "cpp": rem_cpp}
    elem = _make_piece(m, elem_contour, "slice", elem_marks)
    rem = _make_piece(m, rem_contour, "slice", rem_marks)
    return rem, elem


def split_diangle(p):
    """Split a diangle of exceedance e >= 0 into a balanced diangle
    and a tight slice of width e (the identity pairing with the
    vertex-map slice when e = 0)."""
    res = validate_piece(p)
    if "negative-exceedance" in res["violations"]:
        raise GeodesyError("negative-exceedance",
                           "diangles of negative exceedance are rejected")
    if res["violations"]:
        raise GeodesyError("invalid-piece", "; ".join(res["violations"]))
    e = res["exceedance"]
    if e == 0:
        return p, MarkedPiece.vertex_piece("slice")
    m = p.map
    arcs = p.arcs()
    a1, a2, a3, a4 = arcs["c1"], arcs["c12"], arcs["c2"], arcs["c21"]
    v1, v2 = p.mark_vertex("c1"), p.mark_vertex("c2")
    d2 = distances(m, [v2])
    L = a1 + a2
    back = a3 + a4          # the interval [c2, c1]
    k = interval_length(m, a4)
    stops = set(walk_vertices(m, back, v2))
    if k == 0:
        gamma = []
    else:
        gamma = _descend_with_stops(p, L[k - 1], d2, stops)
    vbar = (m.vertex_of[m.alpha[gamma[-1]]] if gamma
            else m.vertex_of[L[k]] if k else v1)
    pos = d2[vbar]
    if pos > len(a3):
        raise GeodesyError("cut-crossed-strict-boundary",
                           "leftmost cut landed beyond the c21 corner")
    bal_contour = L[:k] + gamma + back[pos:]
    slice_contour = back[:pos] + _rev(m, gamma) + L[k:]
    slice_marks = {"c": back[0] if pos else slice_contour[0],
                   "cp": L[k], "cpp": a2[0] if a2 else slice_contour[0]}
    slice_piece = _make_piece(m, slice_contour, "slice", slice_marks)
    if not bal_contour:
        return MarkedPiece.vertex_piece("diangle"), slice_piece
    bal_marks = {"c1": a1[0],
                 "c12": gamma[0] if gamma else back[pos],
                 "c2": back[pos] if pos < len(back) else a4[0],
                 "c21": a4[0]}
    balanced = _make_piece(m, bal_contour, "diangle", bal_marks)
    return balanced, slice_piece


def _sew(b, off_holder, holder_seam, after_dart, off_other, other_start):
    """Glue two pieces already added to builder ``b`` along a seam.

    ``holder_seam`` is the seam arc (contour order) of the piece whose
    seam ends at the common vertex, ``after_dart`` its contour dart
    just after the seam, ``other_start`` the other piece's contour
    dart at the common vertex.  Zero-length seams reduce to a corner
    gluing."""
    b.corner_glue(off_holder + after_dart, off_other + other_start)
    for d in reversed(holder_seam):
        b.fold(b.resolve(off_holder + d))


def glue_slices(pieces):
    """Inverse of decompose_slice: concatenate elementary slices along
    their shared geodesics.  Empty input yields the width-0 slice."""
    if not pieces:
        return MarkedPiece.vertex_piece("slice")
    cur = pieces[-1]
    for elem in reversed(pieces[:-1]):
        cur = _glue_slice_pair(elem, cur)
    return cur


def _glue_slice_pair(elem, rest):
    """Glue an elementary slice to the left side of a slice."""
    b = surgery.MapBuilder()
    off_e = b.add_disjoint(elem.map)
    off_s = b.add_disjoint(rest.map)
    arcs_e = elem.arcs()
    arcs_s = rest.arcs()
    seam = elem.interval("cpp", "c", arcs_e)
    left_s = arcs_s["c"]
    g = len(seam)
    if g > len(left_s):
        raise GeodesyError("seam-mismatch",
                           "pieces do not share a geodesic of equal length")
    extended = left_s + [rest.marks["cp"]]
    other = extended[len(left_s) - g]
    _sew(b, off_e, seam, elem.marks["c"], off_s, other)
    ref = BoundaryRef("face", b.resolve(off_e + elem.marks["cp"]))
    glued, new = b.finalize({"outer": ref})
    contour = boundary_contour(glued)
    n = len(contour)
    cp = new[b.resolve(off_e + elem.marks["cp"])]
    ip = contour.index(cp)
    w_total = 1 + interval_length(rest.map, arcs_s["cp"])
    len_left = (len(arcs_e["c"]) + len(left_s)) - g
    marks = {"cp": cp,
             "cpp": contour[(ip + w_total) % n],
             "c": contour[(ip - len_left) % n]}
    return MarkedPiece(glued, "slice", marks)


def glue_diangle(balanced, slice_piece):
    """Inverse of split_diangle."""
    if slice_piece.is_vertex_piece():
        return balanced
    if balanced.is_vertex_piece():
        s = slice_piece
        marks = {"c1": s.marks["cp"], "c12": s.marks["cpp"],
                 "c2": s.marks["c"], "c21": s.marks["cp"]}
        return MarkedPiece(s.map, "diangle", marks)
    b = surgery.MapBuilder()
    off_b = b.add_disjoint(balanced.map)
    off_s = b.add_disjoint(slice_piece.map)
    arcs_b = balanced.arcs()
    seam_b = arcs_b["c12"]          # the cut, from w12bar to v2bar
    # the slice holds the reversed cut at the end of its [c, cp] arc
    left_s = slice_piece.arcs()["c"]
    g = len(seam_b)
    if g > len(left_s):
        raise GeodesyError("seam-mismatch",
                           "pieces do not share a geodesic of equal length")
    holder_seam = left_s[len(left_s) - g:] if g else []
    _sew(b, off_s, holder_seam, slice_piece.marks["cp"],
         off_b, balanced.marks["c12"])
    ref = BoundaryRef("face", b.resolve(off_b + balanced.marks["c1"]))
    glued, new = b.finalize({"outer": ref})

    def live(off, d):
        return new[b.resolve(off + d)]

    marks = {"c1": live(off_b, balanced.marks["c1"]),
             "c12": live(off_s, slice_piece.marks["cpp"]),
             "c2": live(off_s, slice_piece.marks["c"]),
             "c21": live(off_b, balanced.marks["c21"])}
    return MarkedPiece(glued, "diangle", marks)

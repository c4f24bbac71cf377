"""Assembling a three-boundary map from five marked pieces.

A quintuple (three diangles of exceedances e1, e2, e3 and two
triangles) is chained together by identifying marked corners, the two
procedure-specific end identifications are applied, and the three
resulting special faces are zipped shut by red-to-blue gluing.  The
surviving blue edges become the three labeled boundaries, of lengths
(e1+e2, e2+e3, e3+e1) for procedure I and (e2, 2*e1+e2+e3, e3) for
procedure II.
"""

from .mapcore import BoundaryRef
from . import geodesy
from . import surgery


class AssemblyError(RuntimeError):
    def __init__(self, reason, message=None):
        super().__init__(message or reason)
        self.reason = reason


class Quintuple:
    """Three diangles and two triangles ready for assembly.

    ``diangles[0]`` sits between the two triangles in the chain,
    ``diangles[1]`` beyond ``triangles[0]`` and ``diangles[2]`` beyond
    ``triangles[1]``.  At least one piece must differ from the
    vertex-map.
    """

    def __init__(self, diangles, triangles):
        if len(diangles) != 3 or len(triangles) != 2:
            raise AssemblyError("bad-quintuple",
                                "need three diangles and two triangles")
        self.diangles = list(diangles)
        self.triangles = list(triangles)
        self.exceedances = []
        for i, p in enumerate(self.diangles):
            if p.kind != "diangle":
                raise AssemblyError("bad-quintuple",
                                    "piece %d is not a diangle" % i)
            res = geodesy.validate_piece(p)
            if res["violations"]:
                raise AssemblyError("invalid-piece",
                                    "; ".join(res["violations"]))
            self.exceedances.append(res["exceedance"])
        for i, p in enumerate(self.triangles):
            if p.kind != "triangle":
                raise AssemblyError("bad-quintuple",
                                    "piece %d is not a triangle" % i)
            res = geodesy.validate_piece(p)
            if res["violations"]:
                raise AssemblyError("invalid-piece",
                                    "; ".join(res["violations"]))

    def pieces(self):
        return self.diangles + self.triangles

    def is_trivial(self):
        return all(p.is_vertex_piece() for p in self.pieces())

    def to_json(self):
        return {"diangles": [p.to_json() for p in self.diangles],
                "triangles": [p.to_json() for p in self.triangles]}

    @classmethod
    def from_json(cls, obj):
        return cls([geodesy.MarkedPiece.from_json(x)
                    for x in obj["diangles"]],
                   [geodesy.MarkedPiece.from_json(x)
                    for x in obj["triangles"]])


class GluingPattern:
    """Result of the lattice-path matching on a cyclic red/blue word:
    a match per red position, the unmatched blue positions, and (for a
    balanced word) the positions whose preceding corner becomes the
    boundary-vertex."""

    def __init__(self, matches, unmatched, vertex_positions):
        self.matches = matches
        self.unmatched = unmatched
        self.vertex_positions = vertex_positions


def red_to_blue_match(eps):
    """Match each red (-1) position of a cyclic +-1 sequence to the
    next blue (+1) position returning to the same lattice-path height.

    The per-period sum must be nonnegative; exactly that many blue
    positions per period stay unmatched.  When the sum is zero the
    unmatched set is empty and the positions k with all partial sums
    ``sum(eps[k:l+1]) <= 0`` are reported instead: their preceding
    corners glue together into the boundary-vertex.
    """
    period = len(eps)
    if period == 0:
        return GluingPattern({}, [], [])
    if any(e not in (-1, 1) for e in eps):
        raise AssemblyError("bad-sequence", "entries must be +1 or -1")
    excess = sum(eps)
    if excess < 0:
        raise AssemblyError("negative-excess",
                            "per-period sum must be nonnegative")
    matches = {}
    for k in range(period):
        if eps[k] != -1:
            continue
        total = 0
        for step in range(2 * period):
            total += eps[(k + step) % period]
            if total == 0:
                matches[k] = (k + step) % period
                break
        else:
            raise AssemblyError("no-match",
                                "red position %d finds no blue match" % k)
    matched_blue = set(matches.values())
    if len(matched_blue) != len(matches):
        raise AssemblyError("no-match", "two reds matched the same blue")
    unmatched = [k for k in range(period)
                 if eps[k] == 1 and k not in matched_blue]
    vertex_positions = []
    if excess == 0:
        for k in range(period):
            total = 0
            good = True
            for step in range(period):
                total += eps[(k + step) % period]
                if total > 0:
                    good = False
                    break
            if good:
                vertex_positions.append(k)
    return GluingPattern(matches, unmatched, vertex_positions)


# -- corner sites and vertex merging -----------------------------------

# attachment slots per piece position in the chain, in counterclockwise
# order around the piece
_SLOTS = {"diangle": ("c12", "c21"), "triangle": ("c12", "c23", "c31")}

# chain identifications: middle diangle 0 between triangles 3 and 4,
# end diangles 1 and 2 beyond them
_CHAIN = (
    ((1, "c21"), (3, "c12")),
    ((3, "c31"), (0, "c12")),
    ((0, "c21"), (4, "c12")),
    ((4, "c23"), (2, "c12")),
)
# free attachment points, identified pairwise by the procedure
_U = {1: (4, "c31"), 2: (1, "c12"), 3: (3, "c23"), 4: (2, "c21")}
_PROC_PAIRS = {"I": ((1, 2), (3, 4)), "II": ((1, 4), (2, 3))}

# per boundary label, the contour arcs of the special face in
# counterclockwise order, as (piece index, arc name) pairs
_SIDE_A_I = ((4, "c31"), (4, "c1"), (0, "c21"), (0, "c1"),
             (3, "c31"), (3, "c1"), (1, "c21"), (1, "c1"))
_SIDE_C_I = ((3, "c23"), (3, "c3"), (0, "c12"), (0, "c2"),
             (4, "c12"), (4, "c2"), (2, "c12"), (2, "c2"))
_SIDE_B_I = ((1, "c12"), (1, "c2"), (3, "c12"), (3, "c2"),
             (2, "c21"), (2, "c1"), (4, "c23"), (4, "c3"))
_SIDE_A_II = ((1, "c12"), (1, "c2"), (3, "c12"), (3, "c2"))
_SIDE_C_II = ((2, "c21"), (2, "c1"), (4, "c23"), (4, "c3"))
_SIDE_B_II = ((4, "c31"), (4, "c1"), (0, "c21"), (0, "c1"),
              (3, "c31"), (3, "c1"), (1, "c21"), (1, "c1"),
              (3, "c23"), (3, "c3"), (0, "c12"), (0, "c2"),
              (4, "c12"), (4, "c2"), (2, "c12"), (2, "c2"))
_SIDES = {"I": {"A": _SIDE_A_I, "B": _SIDE_B_I, "C": _SIDE_C_I},
          "II": {"A": _SIDE_A_II, "B": _SIDE_B_II, "C": _SIDE_C_II}}
# class representative site per boundary, for the boundary-vertex case
_SIDE_START = {"I": {"A": 1, "B": 3, "C": 3},
               "II": {"A": 2, "B": 1, "C": 4}}


def _site_classes(pieces, idents):
    """Union-find over attachment slots: slots of one vertex-piece
    share its vertex, identified slots merge."""
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for i, p in enumerate(pieces):
        for name in _SLOTS[p.kind]:
            parent[(i, name)] = (i, name)
    for i, p in enumerate(pieces):
        if p.is_vertex_piece():
            slots = _SLOTS[p.kind]
            for name in slots[1:]:
                union((i, slots[0]), (i, name))
    for a, b in idents:
        union(a, b)
    classes = {}
    for site in parent:
        classes.setdefault(find(site), []).append(site)
    return classes


def _ordered_corners(pieces, idents, sites):
    """Counterclockwise cyclic order of the real (non-vertex-piece)
    corner slots merging into one vertex."""
    partner = {}
    for a, b in idents:
        partner[a] = b
        partner[b] = a
    real = [s for s in sites if not pieces[s[0]].is_vertex_piece()]
    if not real:
        raise AssemblyError("trivial-quintuple",
                            "assembly collapses to the vertex-map")
    order = [real[0]]
    while True:
        t = partner[order[-1]]
        while pieces[t[0]].is_vertex_piece():
            slots = _SLOTS[pieces[t[0]].kind]
            t = (t[0], slots[(slots.index(t[1]) + 1) % len(slots)])
            t = partner[t]
        if t == order[0]:
            break
        order.append(t)
    if len(order) != len(real):
        raise AssemblyError("bad-gluing",
                            "attachment sites do not close up cyclically")
    return order


def assemble(q, proc, check_lengths=True):
    """Glue a quintuple into a map with three labeled boundaries."""
    if proc not in _PROC_PAIRS:
        raise AssemblyError("bad-procedure", "procedure must be 'I' or 'II'")
    if q.is_trivial():
        raise AssemblyError("trivial-quintuple",
                            "all five pieces are the vertex-map")
    pieces = q.pieces()
    e1, e2, e3 = q.exceedances

    b = surgery.MapBuilder()
    offsets = []
    arcs = []
    colors = {}
    for p in pieces:
        if p.is_vertex_piece():
            offsets.append(None)
            arcs.append(None)
            continue
        off = b.add_disjoint(p.map)
        offsets.append(off)
        arcs.append({name: [off + d for d in ds]
                     for name, ds in p.arcs().items()})
        for d, col in p.colors().items():
            colors[off + d] = col

    idents = list(_CHAIN)
    for x, y in _PROC_PAIRS[proc]:
        idents.append((_U[x], _U[y]))

    def mark_dart(site):
        i, name = site
        return offsets[i] + pieces[i].marks[name]

    # merge every class of identified corners, splicing rotations in
    # counterclockwise order
    for sites in _site_classes(pieces, idents).values():
        order = _ordered_corners(pieces, idents, sites)
        darts = [mark_dart(s) for s in order]
        prevs = [b.sigma_inv[d] for d in darts]
        for i in range(len(darts)):
            b._set_sigma(prevs[i], darts[(i + 1) % len(darts)])

    # zip each special face shut by red-to-blue gluing; the contour
    # arcs of each face are known from the chain layout
    refs = {}
    for label in "ABC":
        side = [d for i, name in _SIDES[proc][label]
                if offsets[i] is not None for d in arcs[i][name]]
        if not side:
            # the boundary collapses to the merged attachment vertex
            site = _U[_SIDE_START[proc][label]]
            if offsets[site[0]] is None:
                site = next(s for s in _expand_class(pieces, idents, site)
                            if offsets[s[0]] is not None)
            refs[label] = ("vertex", mark_dart(site))
            continue
        refs[label] = _zip_face(b, side, colors)

    boundaries = {}
    for label, (kind, dart) in refs.items():
        boundaries[label] = BoundaryRef(kind, dart)
    out, new = b.finalize(boundaries)
    diags = out.validate()
    if diags:
        raise AssemblyError("bad-gluing", "; ".join(diags))
    if check_lengths:
        want = {"I": {"A": e1 + e2, "B": e2 + e3, "C": e3 + e1},
                "II": {"A": e2, "B": 2 * e1 + e2 + e3, "C": e3}}[proc]
        for label in "ABC":
            if out.boundary_length(label) != want[label]:
                raise AssemblyError(
                    "bad-gluing",
                    "boundary %s has length %d, expected %d"
                    % (label, out.boundary_length(label), want[label]))
    return out


def _expand_class(pieces, idents, site):
    for sites in _site_classes(pieces, idents).values():
        if site in sites:
            return sites
    return [site]


def _zip_face(b, side, colors):
    """Repeatedly glue red contour edges onto the blue edges following
    them (counterclockwise with the face on the left, i.e. preceding
    them in the face orbit).  Returns the boundary reference."""
    live = set(side)
    # the face orbit may be rotated relative to the side list; work on
    # the current orbit each pass
    while True:
        handle = next(iter(live))
        contour = b.face_contour(handle)
        if not all(d in live for d in contour) or len(contour) != len(live):
            raise AssemblyError("bad-gluing",
                                "special face disagrees with its arcs")
        reds = [d for d in contour if colors[d] == "red"]
        if not reds:
            return ("face", contour[0])
        k = len(contour)
        done = False
        for i in range(k):
            d1, d2 = contour[i], contour[(i + 1) % k]
            if colors[d1] == "blue" and colors[d2] == "red":
                # the base of the red edge, traversed with the face on
                # the left, survives the fold
                red_base = b.alpha[d2]
                b.fold(d1)
                live.discard(d1)
                live.discard(d2)
                done = True
                break
        if not done:
            raise AssemblyError("bad-gluing",
                                "red edges left with no blue neighbor")
        if not live:
            # fully zipped: the boundary is the vertex preceding the
            # outermost red edge, the image of every lattice-path
            # maximum of the red/blue word
            return ("vertex", red_base)

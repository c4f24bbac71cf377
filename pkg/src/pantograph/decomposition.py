"""Cutting a map with three tight boundaries into its five pieces.

This module inverts the assembly of quintuples.  The map is lifted to
a truncated universal cover, the distance fields of the three
boundaries (and of a deck translate of the middle one) are combined
into equilibrium latitudes, and the five pieces are read off by
cutting the base map along leftmost bigeodesics launched from the
equilibrium vertices.
"""

import functools

from .mapcore import PlanarMap, BoundaryRef
from . import cover as covmod
from .cover import mul, inv_word, left_canon, CoverError
from . import surgery
from . import geodesy
from .geodesy import MarkedPiece
from .assembly import Quintuple


# calibration of the transversal order: whether the distinguished
# extreme of a latitude set is the maximum of the comparator, and the
# sign of the spiral winding coordinate at ideal merge nodes
_SEL_MAX = True
_WIND = 1


class DecompositionError(RuntimeError):
    def __init__(self, reason, message=None):
        super().__init__(message or reason)
        self.reason = reason


def map_type(a, b, c):
    """Which assembly procedure(s) can produce boundary half-lengths
    (a, b, c): 'I' when the largest is smaller than the sum of the
    others, 'II' when larger, 'both' at equality."""
    hi = max(a, b, c)
    rest = a + b + c - hi
    if hi < rest:
        return "I"
    if hi > rest:
        return "II"
    return "both"


# -- label permutations -------------------------------------------------

_CYCLES = (
    {"A": "A", "B": "B", "C": "C"},
    {"A": "B", "B": "C", "C": "A"},
    {"A": "C", "B": "A", "C": "B"},
)


def _relabel(m, perm):
    """A copy of m with boundary label x renamed to perm[x]."""
    return PlanarMap(list(m.alpha), list(m.sigma),
                     {perm[lab]: ref for lab, ref in m.boundaries.items()},
                     list(m.zero_length))


def _perm_longest_to_b(lengths):
    """The cyclic label permutation sending (one of) the longest
    boundaries to B; prefers the identity."""
    hi = max(lengths.values())
    for perm in _CYCLES:
        src = next(x for x in "ABC" if perm[x] == "B")
        if lengths[src] == hi:
            return perm
    raise DecompositionError("internal", "no cyclic permutation found")


def _normalized(m):
    labs = sorted(m.boundaries)
    if len(labs) != 3:
        raise DecompositionError("bad-input", "need three boundaries")
    if labs == ["A", "B", "C"]:
        return m
    return _relabel(m, dict(zip(labs, "ABC")))


# -- equilibrium data ---------------------------------------------------

class EquilibriumData:
    """Pair distances, latitudes and equilibrium vertices on the cover.

    ``pair`` holds the distances d_AB, d_BC, d_CA between the
    distinguished boundary lifts, ``primed`` the distances of the
    flipped triple through the translated middle boundary B'.  ``r``
    and ``rp`` are the corresponding latitudes; ``v`` maps anchor
    names to cover node indices and ``v_base`` to the underlying base
    vertices.  When the middle boundary is at least as long as the two
    others combined, the latitudes and anchors of the two flipped
    triangles (``u``, ``t``, ``w``, ``w_base``) are filled in too.
    """

    def __init__(self):
        self.lengths = {}
        self.kind = None
        self.pair = {}
        self.primed = {}
        self.r = {}
        self.rp = {}
        self.v = {}
        self.v_base = {}
        self.u = None
        self.t = None
        self.w = None
        self.w_base = None

    def to_dict(self):
        out = {
            "lengths": dict(self.lengths),
            "type": self.kind,
            "pair_distances": dict(self.pair),
            "primed_distances": dict(self.primed),
            "latitudes": dict(self.r),
            "primed_latitudes": dict(self.rp),
            "equilibrium_vertices": dict(self.v_base),
        }
        if self.w_base is not None:
            out["flipped_latitudes"] = {**self.u, **self.t}
            out["flipped_vertices"] = dict(self.w_base)
        return out


# -- half bigeodesics on the cover -------------------------------------

class _Half:
    """A leftmost descending path on the cover, grown on demand.

    Positions are (blown-up-map vertex, reduced word) pairs; ``keys``
    are the corresponding cover node keys, ``values`` the field
    values, ``darts`` the unit darts traversed (ids shared with the
    base map)."""

    def __init__(self, space, field, pos):
        self.space = space
        self.field = field
        self.pts = [pos]
        self.keys = [space.geom.node_key(*pos)]
        self.values = [space.val(field, pos)]
        self.darts = []
        self.first = None

    def push(self, dart, frompos, topos):
        # the scan may have slid along the spiral before finding the
        # dart; keep the position actually used
        self.pts[-1] = frompos
        self.darts.append(dart)
        self.pts.append(topos)
        self.keys.append(self.space.geom.node_key(*topos))
        self.values.append(self.values[-1] - 1)

    def ensure(self, i):
        while len(self.darts) < i:
            self.advance()

    def advance(self):
        space = self.space
        if not self.darts:
            if self.first is None:
                raise DecompositionError(
                    "inconclusive", "descent past a boundary lift")
            self.push(*self.first)
            return
        arrive = space.mb.alpha[self.darts[-1]]
        self.push(*space.step(self.field, self.pts[-1], arrive))


class _Shifted:
    """A deck translate of a half, sharing its growth with the source."""

    def __init__(self, space, src, word, field):
        self.space = space
        self.src = src
        self.word = word
        self.field = field
        self.shift = space.val(field, self._pos(0)) - src.values[0]

    def _pos(self, i):
        v, w = self.src.pts[i]
        return (v, mul(self.word, w))

    @property
    def darts(self):
        return self.src.darts

    @property
    def pts(self):
        return [self._pos(i) for i in range(len(self.src.pts))]

    @property
    def keys(self):
        return [self.space.geom.node_key(*self._pos(i))
                for i in range(len(self.src.pts))]

    @property
    def values(self):
        return [x + self.shift for x in self.src.values]

    def ensure(self, i):
        self.src.ensure(i)


class _Wall:
    """A leftmost bigeodesic: two halves launched at one anchor."""

    def __init__(self, half_x, half_y):
        self.x = half_x
        self.y = half_y

    def flip(self):
        return _Wall(self.y, self.x)


# -- the cover walking engine ------------------------------------------

def _radius(m, labels):
    """Word radius for the cover truncation: enough for the walls of
    the decomposition, which descend from latitudes bounded by the
    distances between boundary targets, plus the deck periods used to
    translate the middle boundary.  Tighter than the general-purpose
    default, since covers grow geometrically with the radius."""
    geom = covmod.CoverGeometry(m, labels)
    maxlab = max((len(w) for w in labels.labels.values()), default=1)
    maxper = max([len(mc.p) for mc in geom.marker.values()]
                 + [maxlab * m.boundary_length(x) for x in m.boundaries])
    targets = []
    for x in m.boundaries:
        ref = m.boundaries[x]
        targets.append(m.vertex_of[ref.dart] if ref.dart is not None
                       else 0)
    dmax = 1
    for v in targets:
        dist = geodesy.distances(m, [v])
        dmax = max(dmax, max(dist[u] for u in targets))
    dmax += max(m.boundary_length(x) for x in m.boundaries) // 2
    return 3 + maxper + maxlab * ((dmax + 1) // 2 + 1)


class _Space:
    """Walking machinery on the truncated cover of one map."""

    def __init__(self, m, pad=0, cap=200000):
        self.m = m
        arcs, labels = covmod.build_arc_system(m)
        self.labels = labels
        self.mb = labels.map
        W = max(4, _radius(m, labels) + pad)
        self.cov = covmod.TruncatedCover(m, labels, W, cap=cap)
        self.geom = self.cov.geom
        mb = self.mb
        self.cw = {mb.sigma[d]: d for d in range(mb.n)}
        self.two = {x: m.boundary_length(x) for x in "ABC"}
        self.lim = 80 + 10 * mb.n
        self.F = {x: covmod.busemann_field(self.cov, x) for x in "ABC"}
        self._make_translations()
        self._make_bprime()
        self.floor = {x: min(self.F[x].values[i]
                             for i in self.F[x].certified)
                      for x in self.F}
        self._fname = {id(self.F[x]): x for x in self.F}
        self._launch_cache = {}

    # -- deck translations ---------------------------------------------

    def _make_translations(self):
        """The deck words of the fundamental quadrangle: its two middle
        corners are boundary-B lifts exchanged simultaneously by a
        power of the A-period and a power of the C-period.  trans['A']
        and trans['C'] both move the primed lift onto the unprimed
        one, so their quotient stabilizes the lift tracked by the B
        field; the free group admits exactly one such pair."""
        pA = self.F["A"].period
        pB = self.F["B"].period
        pC = self.F["C"].period
        stab = {""}
        wpos = wneg = ""
        for _ in range(8):
            wpos = mul(wpos, pB)
            wneg = mul(wneg, inv_word(pB))
            stab.add(wpos)
            stab.add(wneg)
        found = None
        for tA in (pA, inv_word(pA)):
            for k in (1, -1, 2, -2, 3, -3, 4, -4):
                w = ""
                step = pC if k > 0 else inv_word(pC)
                for _ in range(abs(k)):
                    w = mul(w, step)
                if mul(inv_word(tA), w) in stab:
                    found = (tA, w)
                    break
            if found:
                break
        if found is None:
            raise DecompositionError(
                "inconclusive", "boundary translations do not close up")
        self.trans = {"A": found[0], "C": found[1]}

    def _make_bprime(self):
        """Split the middle boundary field into the two quadrangle
        corners: the lift tracked by the computed B field is the
        primed corner, and its image under trans['A'] serves as the
        unprimed one (this orientation makes the primed triangle the
        one closer to A)."""
        fB = self.F["B"]
        cov = self.cov
        tA = self.trans["A"]
        back = inv_word(tA)
        values = {}
        certified = set()
        for i in range(len(cov.nodes)):
            j = cov.deck(back, i)
            if j is not None and j in fB.values:
                values[i] = fB.values[j]
                if j in fB.certified:
                    certified.add(i)
        ray = [j for j in (cov.deck(tA, i) for i in fB.ray)
               if j is not None]
        if not certified or not ray:
            raise DecompositionError(
                "inconclusive", "translated boundary field out of range")
        period = mul(tA, mul(fB.period, back))
        self.F["B'"] = fB
        self.F["B"] = covmod.BusemannField(
            cov, "B", fB.two_a, period, values, certified, ray)

    # -- elementary queries --------------------------------------------

    def val(self, field, pos):
        i = self.cov.index.get(self.geom.node_key(*pos))
        if i is None or i not in field.certified:
            raise DecompositionError(
                "inconclusive", "walk leaves the certified cover region")
        return field.values[i]

    def base_vertex(self, key):
        """The base-map vertex a cover node projects to."""
        if key[0] == "r":
            d = self.mb.vertex_darts(key[1])[0]
            return self.m.vertex_of[d]
        return self.m.boundary_target(key[1])[1]

    def _scan(self, v, w, d, direction):
        """Darts in rotation order after d at position (v, w):
        direction -1 scans clockwise, +1 counterclockwise; zero-length
        marker edges are contracted, sliding along the ideal spiral."""
        mb = self.mb
        nxt = self.cw if direction < 0 else mb.sigma
        d = nxt[d]
        for _ in range(self.lim):
            if mb.edge_length(d) == 0:
                a = mb.alpha[d]
                w = mul(w, self.labels.label(d))
                v = mb.vertex_of[a]
                d = nxt[a]
                continue
            yield d, v, w
            d = nxt[d]

    def dest(self, d, v, w):
        return (self.mb.vertex_of[self.mb.alpha[d]],
                mul(w, self.labels.label(d)))

    def step(self, field, pos, arrive):
        """Leftmost descending unit step: the first dart clockwise of
        the arrival dart whose far end lowers the field by one."""
        cur = self.val(field, pos)
        for d, vv, ww in self._scan(pos[0], pos[1], arrive, -1):
            if self.val(field, self.dest(d, vv, ww)) == cur - 1:
                return d, (vv, ww), self.dest(d, vv, ww)
        raise DecompositionError("inconclusive", "no descending dart")

    # -- pair distances and latitude sets ------------------------------

    def pair_distance(self, fx, fy):
        common = fx.certified & fy.certified
        core = {self.cov.node(v, "") for v in range(self.mb.num_vertices)}
        if not core <= common:
            raise DecompositionError(
                "inconclusive", "fundamental domain not certified")
        return min(fx.values[i] + fy.values[i] for i in common)

    def latitude(self, fx, fy, dxy, r):
        common = fx.certified & fy.certified
        out = [i for i in common
               if fx.values[i] + fy.values[i] == dxy
               and fx.values[i] == r]
        if not out:
            raise DecompositionError(
                "inconclusive", "empty equilibrium latitude")
        return out

    # -- launching bigeodesics -----------------------------------------

    def _classify(self, d, v, w, fx, fy, vx, vy):
        try:
            far = self.dest(d, v, w)
            if self.val(fx, far) == vx - 1:
                return "x"
            if self.val(fy, far) == vy - 1:
                return "y"
            return "-"
        except DecompositionError:
            return "?"

    def launch(self, fx, fy, node):
        """Launch darts of the leftmost bigeodesic at an equilibrium
        node: (state toward x, state toward y), each (dart, position)
        or None for a zero-length half."""
        ck = (id(fx), id(fy), node)
        got = self._launch_cache.get(ck)
        if got is not None:
            return got
        key = self.cov.nodes[node]
        vx = fx.values[node]
        vy = fy.values[node]
        if key[0] == "r":
            out = self._launch_regular(key, fx, fy, vx, vy)
        else:
            out = self._launch_ideal(key, fx, fy, vx, vy)
        self._launch_cache[ck] = out
        return out

    def _launch_regular(self, key, fx, fy, vx, vy):
        v, w = key[1], key[2]
        ring = [self.mb.vertex_darts(v)[0]]
        while True:
            nd = self.cw[ring[-1]]
            if nd == ring[0]:
                break
            ring.append(nd)
        types = [self._classify(d, v, w, fx, fy, vx, vy) for d in ring]
        if "?" in types:
            raise DecompositionError(
                "inconclusive", "launch ring not fully certified")
        typed = [(i, t) for i, t in enumerate(types) if t in "xy"]
        kinds = {t for _, t in typed}
        if kinds != {"x", "y"}:
            raise DecompositionError(
                "inconclusive", "degenerate launch at a regular node")
        ex = ey = None
        for j, (i, t) in enumerate(typed):
            prev = typed[j - 1][1]
            if t == "x" and prev == "y":
                if ex is not None:
                    raise DecompositionError(
                        "inconclusive", "interleaved launch types")
                ex = ring[i]
            if t == "y" and prev == "x":
                if ey is not None:
                    raise DecompositionError(
                        "inconclusive", "interleaved launch types")
                ey = ring[i]
        return (ex, (v, w)), (ey, (v, w))

    def _launch_ideal(self, key, fx, fy, vx, vy):
        reps = self.geom.stands_for(key, self.cov.W)
        if not reps:
            raise DecompositionError("inconclusive", "no lift available")
        v, w = min(reps)
        anchor = self.mb.vertex_darts(v)[0]
        line = [item for item in self._scan(v, w, anchor, +1)]
        line.reverse()
        if self.mb.edge_length(anchor) != 0:
            line.append((anchor, v, w))
        line.extend(self._scan(v, w, anchor, -1))
        states = []
        for d, vv, ww in line:
            t = self._classify(d, vv, ww, fx, fy, vx, vy)
            if t in "xy":
                states.append((t, d, vv, ww))
        pattern = ""
        for t, d, vv, ww in states:
            if not pattern or pattern[-1] != t:
                pattern += t
        if len(pattern) > 2:
            raise DecompositionError(
                "inconclusive", "interleaved launch types on the spiral")
        sx = next((s for s in states if s[0] == "x"), None)
        sy = next((s for s in states if s[0] == "y"), None)
        if sx is None and not (fx.two_a == 0 and vx == 0):
            raise DecompositionError(
                "inconclusive", "missing launch dart toward first end")
        if sy is None and not (fy.two_a == 0 and vy == 0):
            raise DecompositionError(
                "inconclusive", "missing launch dart toward second end")
        out_x = (sx[1], (sx[2], sx[3])) if sx is not None else None
        out_y = (sy[1], (sy[2], sy[3])) if sy is not None else None
        return out_x, out_y

    def half(self, field, state, node):
        """A half bigeodesic from a launch state, or a trivial one
        anchored at the node when the state is None."""
        if state is None:
            reps = self.geom.stands_for(self.cov.nodes[node], self.cov.W)
            return _Half(self, field, min(reps))
        d, pos = state
        h = _Half(self, field, pos)
        h.first = (d, pos, self.dest(d, *pos))
        h.advance()
        return h

    def wall(self, fx, fy, node):
        sx, sy = self.launch(fx, fy, node)
        return _Wall(self.half(fx, sx, node), self.half(fy, sy, node))

    # -- merging halves ------------------------------------------------

    def merge(self, hu, hv):
        """First common cover node of two halves descending the same
        field; returns the step indices in each half, synchronized by
        field value."""
        name = self._fname.get(id(hu.field))
        floor = self.floor[name] if name is not None else 0
        lev = min(hu.values[0], hv.values[0])
        while lev >= floor:
            iu = hu.values[0] - lev
            iv = hv.values[0] - lev
            hu.ensure(iu)
            hv.ensure(iv)
            if hu.keys[iu] == hv.keys[iv]:
                return iu, iv
            lev -= 1
        raise DecompositionError("inconclusive",
                                 "halves do not merge inside the cover")

    # -- transversal order of a latitude set ---------------------------

    def _spiral_coord(self, pos):
        v, w = pos
        mc = self.geom.marker_of[v]
        rep, n = left_canon(mul(w, mc.q[v]), mc.p)
        return (_WIND * n, mc.pos[v])

    def _cmp_halves(self, field, hu, hv):
        iu, iv = self.merge(hu, hv)
        if iu == 0 or iv == 0:
            return -1 if iu == 0 else 1
        key = hu.keys[iu]
        au = self.mb.alpha[hu.darts[iu - 1]]
        av = self.mb.alpha[hv.darts[iv - 1]]
        if key[0] == "i":
            cu = self._spiral_coord(hu.pts[iu])
            cv = self._spiral_coord(hv.pts[iv])
            if cu == cv:
                return 0
            return -1 if cu < cv else 1
        pos = hu.pts[iu]
        name = self._fname[id(field)]
        if self.val(field, pos) > self.floor[name]:
            o = self.step(field, pos, au)[0]
        else:
            o = au
        d = self.mb.sigma[o]
        for _ in range(self.lim):
            if d == au:
                return -1
            if d == av:
                return 1
            d = self.mb.sigma[d]
        raise DecompositionError("inconclusive", "arrival darts not found")

    def rightmost(self, fx, fy, nodes):
        """The distinguished extreme element of one latitude set,
        resolved by comparing the leftmost descents toward the first
        boundary at their first common node."""
        if len(nodes) == 1:
            return nodes[0]
        halves = {}
        for n in nodes:
            sx, _ = self.launch(fx, fy, n)
            halves[n] = self.half(fx, sx, n)
        order = sorted(nodes, key=functools.cmp_to_key(
            lambda u, v: self._cmp_halves(fx, halves[u], halves[v])))
        return order[-1] if _SEL_MAX else order[0]


# -- contours and piece extraction -------------------------------------

def _segment(half, upto, reverse, alpha):
    darts = half.darts[:upto]
    if reverse:
        return [alpha[d] for d in reversed(darts)]
    return list(darts)


def _build_piece(m, kind, segs):
    """Extract a marked piece from the base map: ``segs`` is a list of
    (mark name, dart list); the concatenated walk is the contour, with
    each mark at the start of its segment."""
    contour = []
    starts = []
    for name, darts in segs:
        starts.append((name, len(contour)))
        contour.extend(darts)
    if not contour:
        return MarkedPiece.vertex_piece(kind)
    piece, old2new = surgery.cut_piece(m, contour)
    marks = {name: old2new[contour[idx % len(contour)]]
             for name, idx in starts}
    return MarkedPiece(piece, kind, marks)


def _fine(space, pos):
    """Corner id of a cover position: the node key, refined at ideal
    nodes by the spiral coordinate so distinct turns stay distinct."""
    key = space.geom.node_key(*pos)
    if key[0] == "i":
        return key + space._spiral_coord(pos)
    return key


def _cover_segment(space, half, upto, reverse):
    """Contour entries (dart, attach, far) from the first steps of a
    half: ``attach`` is the cover position at the dart's attachment,
    ``far`` the position at the attachment of its reversal."""
    half.ensure(upto)
    out = []
    for t in range(upto):
        d = half.darts[t]
        b = half.pts[t]
        out.append((d, b, space.dest(d, *b)))
    if reverse:
        alpha = space.mb.alpha
        return [(alpha[d], e, b) for d, b, e in reversed(out)]
    return out


def _cut_lifted(space, contour):
    """Cut out the piece bounded by a closed walk on the cover.

    ``contour`` lists (dart, attach, far) entries walking the piece
    boundary with the interior on the left; darts are unit darts and
    the positions resolve which lift each traversal runs along.  An
    edge walked twice along the same cover edge is kept once, while
    traversals along distinct lifts get independent copies.  Returns
    the piece map and the dart ids of the contour traversals."""
    mb = space.mb
    alpha = mb.alpha
    k = len(contour)

    # chain the corner positions around the contour in one consistent
    # gauge: positions recorded by independently anchored halves can
    # represent the same ideal corner with words differing by a
    # stabilizer element, so only the seed position is trusted and
    # every later corner is derived by scanning.  A piece corner can
    # never sweep a full spiral turn (the boundary lift would then lie
    # inside the piece), so the first occurrence of the departure dart
    # clockwise of the arrival is the departure corner.
    bs = [None] * k
    es = [None] * k
    raw_wedge = [None] * k
    bs[0] = contour[0][1]
    for i in range(k):
        es[i] = space.dest(contour[i][0], *bs[i])
        j = (i + 1) % k
        rd = alpha[contour[i][0]]
        dn = contour[j][0]
        got = []
        if dn == rd:
            bj = es[i]
        else:
            bj = None
            for dd, vv, ww in space._scan(es[i][0], es[i][1], rd, -1):
                if dd == dn:
                    bj = (vv, ww)
                    break
                got.append((dd, (vv, ww)))
            if bj is None:
                raise DecompositionError(
                    "inconclusive", "contour sector does not close")
        if space.geom.node_key(*bj) != space.geom.node_key(*contour[j][1]):
            raise DecompositionError("invalid", "contour is not closed")
        raw_wedge[j] = list(reversed(got))
        if j == 0:
            if bj != bs[0]:
                raise DecompositionError("invalid",
                                         "contour does not close up")
        else:
            bs[j] = bj

    fb = [_fine(space, b) for b in bs]
    fe = [_fine(space, e) for e in es]
    dep = {}
    for i, (d, _, _) in enumerate(contour):
        if (d, fb[i]) in dep:
            raise DecompositionError("invalid",
                                     "contour repeats a cover dart")
        dep[(d, fb[i])] = i
    partner = []
    for i, (d, _, _) in enumerate(contour):
        j = dep.get((alpha[d], fe[i]))
        partner.append(("B", j) if j is not None
                       else ("I", (alpha[d], fe[i])))
    arrivals = {}
    for i, p in enumerate(partner):
        if p[0] == "I":
            arrivals[p[1]] = i
        elif partner[p[1]] != ("B", i):
            raise DecompositionError("invalid", "contour pairing mismatch")

    # interior dart copies claimed by the corner wedges, in rotation
    # order after each departure
    visit_nodes = set(fb)
    claimed = {}
    wedge = []
    for i in range(k):
        got = []
        for dd, pos in raw_wedge[i]:
            f = _fine(space, pos)
            cp = (dd, f)
            if cp in dep or cp in arrivals or cp in claimed:
                raise DecompositionError("invalid",
                                         "contour sectors overlap")
            claimed[cp] = (pos, space.dest(dd, *pos))
            got.append(cp)
        wedge.append(got)

    # absorb whole cover vertices strictly inside the piece
    queue = [cp for g in wedge for cp in g]
    absorbed = {}
    rings = []
    qi = 0
    while qi < len(queue):
        dd, f = queue[qi]
        qi += 1
        att, fp = claimed[(dd, f)]
        ff = _fine(space, fp)
        mate = (alpha[dd], ff)
        if ff in visit_nodes or ff in absorbed:
            if mate not in claimed:
                raise DecompositionError(
                    "invalid", "an interior edge crosses the contour")
            continue
        if space.geom.node_key(*fp)[0] == "i":
            raise DecompositionError(
                "invalid", "a boundary lift lies inside the piece")
        claimed[mate] = (fp, att)
        ring = [mate]
        for d2, vv, ww in space._scan(fp[0], fp[1], mate[0], +1):
            if d2 == mate[0]:
                break
            cp2 = (d2, ff)
            if cp2 in dep or cp2 in arrivals or cp2 in claimed:
                raise DecompositionError("invalid",
                                         "interior rings collide")
            claimed[cp2] = ((vv, ww), space.dest(d2, vv, ww))
            ring.append(cp2)
            queue.append(cp2)
        else:
            raise DecompositionError("inconclusive",
                                     "interior ring too long")
        absorbed[ff] = ring
        rings.append(ring)

    tokens = [("B", i) for i in range(k)]
    tokens += [p for p in partner if p[0] == "I"]
    tokens += [("I", cp) for g in wedge for cp in g]
    tokens += [("I", cp) for ring in rings for cp in ring]

    # rotation: each visit contributes the arc from its departure
    # through its wedge; the arrival copy turns onto the departure
    sig = {}

    def put(a, b):
        if sig.get(a, b) != b:
            raise DecompositionError("invalid", "inconsistent rotation")
        sig[a] = b

    for i in range(k):
        seq = [("B", i)] + [("I", c) for c in wedge[i]]
        for t in range(len(seq) - 1):
            put(seq[t], seq[t + 1])
        put(seq[-1], partner[(i - 1) % k])
        put(partner[(i - 1) % k], ("B", i))
    for ring in rings:
        for t in range(len(ring)):
            put(("I", ring[t]), ("I", ring[(t + 1) % len(ring)]))
    if len(sig) != len(tokens) or len(set(sig.values())) != len(tokens):
        raise DecompositionError("invalid", "rotation is not a permutation")

    pa = {("B", i): partner[i] for i in range(k)}
    for cp, (att, fp) in claimed.items():
        pa[("I", cp)] = ("I", (alpha[cp[0]], _fine(space, fp)))
    for cp, i in arrivals.items():
        pa[("I", cp)] = ("B", i)
    ids = {t: n for n, t in enumerate(tokens)}
    for t, u in pa.items():
        if u not in ids or pa.get(u) != t:
            raise DecompositionError("invalid", "edge pairing mismatch")

    def dart_of(t):
        return contour[t[1]][0] if t[0] == "B" else t[1][0]

    al = [ids[pa[t]] for t in tokens]
    sg = [ids[sig[t]] for t in tokens]
    zl = [ids[t] for t in tokens if dart_of(t) in space.m.zero_length]
    pm = PlanarMap(al, sg,
                   {"outer": BoundaryRef("face", ids[("B", 0)])}, zl)
    cur = ids[("B", 0)]
    for i in range(k):
        if cur != ids[("B", i)]:
            raise DecompositionError(
                "invalid", "contour is not a face of the piece")
        cur = sg[al[cur]]
    if cur != ids[("B", 0)]:
        raise DecompositionError(
            "invalid", "contour is not a face of the piece")
    return pm, [ids[("B", i)] for i in range(k)]


def _build_cover_piece(space, kind, segs):
    """Extract a marked piece along cover contour segments: ``segs``
    is a list of (mark name, entry list); the concatenation is the
    contour, with each mark at the start of its segment."""
    contour = []
    starts = []
    for name, entries in segs:
        starts.append((name, len(contour)))
        contour.extend(entries)
    if not contour:
        return MarkedPiece.vertex_piece(kind)
    pm, bids = _cut_lifted(space, contour)
    marks = {name: bids[idx % len(bids)] for name, idx in starts}
    return MarkedPiece(pm, kind, marks)


def _triangle_piece(space, walls):
    """Triangle bounded by three walls given as (wall, corner mark) in
    contour order; each wall's x-half meets the previous wall's y-half
    at an apex.  The contour runs apex, corner, apex, corner, apex,
    corner with the interior on the left; with the mirror switch the
    walls are traversed in the opposite rotational sense."""
    if _MIRROR:
        ws = [w for w, _ in walls][::-1]
        walls = [(ws[i].flip(), mark)
                 for i, (_, mark) in enumerate(walls)]
    apices = ("c1", "c2", "c3")
    merges = []
    for i, (wall, mark) in enumerate(walls):
        prev = walls[i - 1][0]
        merges.append(space.merge(wall.x, prev.y))
    segs = []
    for i, (wall, mark) in enumerate(walls):
        iu, _ = merges[i]
        _, jv = merges[(i + 1) % 3]
        segs.append((apices[i], _cover_segment(space, wall.x, iu, True)))
        segs.append((mark, _cover_segment(space, wall.y, jv, False)))
    return _build_cover_piece(space, "triangle", segs)


def _diangle_piece(space, wall_p, wall_q):
    """Diangle between two walls of one boundary pair: wall_p carries
    c12 (the anchor of higher first-field value), wall_q carries c21;
    both walls have their x-half toward the exceedance boundary."""
    if _MIRROR:
        wall_p, wall_q = wall_q, wall_p
    ixp, ixq = space.merge(wall_p.x, wall_q.x)
    iyp, iyq = space.merge(wall_p.y, wall_q.y)
    segs = [
        ("c1", _cover_segment(space, wall_p.x, ixp, True)),
        ("c12", _cover_segment(space, wall_p.y, iyp, False)),
        ("c2", _cover_segment(space, wall_q.y, iyq, True)),
        ("c21", _cover_segment(space, wall_q.x, ixq, False)),
    ]
    return _build_cover_piece(space, "diangle", segs)


# -- the equilibrium computation ---------------------------------------

def _halves_even(*vals):
    for x in vals:
        if x % 2:
            raise DecompositionError(
                "inconclusive", "odd equilibrium combination")
    return [x // 2 for x in vals]


def _compute_equilibrium(space, want_flipped):
    fA, fB, fC, fBp = (space.F[x] for x in ("A", "B", "C", "B'"))
    two_a, two_b, two_c = (space.two[x] for x in "ABC")
    eq = EquilibriumData()
    eq.lengths = {"A": two_a, "B": two_b, "C": two_c}
    eq.kind = map_type(two_a, two_b, two_c)

    dAB = space.pair_distance(fA, fB)
    dBC = space.pair_distance(fB, fC)
    dCA = space.pair_distance(fC, fA)
    dCBp = space.pair_distance(fC, fBp)
    dBpA = space.pair_distance(fBp, fA)
    if dBpA != dAB - two_a:
        raise DecompositionError(
            "inconclusive", "translated pair distance mismatch")
    if dCBp != dBC + two_c - two_b:
        raise DecompositionError(
            "inconclusive", "translated pair distance mismatch")
    eq.pair = {"AB": dAB, "BC": dBC, "CA": dCA}
    eq.primed = {"AC": dCA, "CB'": dCBp, "B'A": dBpA}

    rA, rB, rC = _halves_even(dAB + dCA - dBC, dAB + dBC - dCA,
                              dBC + dCA - dAB)
    rpA, rpC, rpB = _halves_even(dBpA + dCA - dCBp, dCA + dCBp - dBpA,
                                 dCBp + dBpA - dCA)
    eq.r = {"A": rA, "B": rB, "C": rC}
    eq.rp = {"A": rpA, "C": rpC, "B'": rpB}
    if 2 * (rA - rpA) != two_a + two_c - two_b:
        raise DecompositionError(
            "inconclusive", "latitude difference violates the lengths")

    anchors = {
        "AB": (fA, fB, dAB, rA),
        "BC": (fB, fC, dBC, rB),
        "CA": (fC, fA, dCA, rC),
        "AC": (fA, fC, dCA, rpA),
        "CB'": (fC, fBp, dCBp, rpC),
        "B'A": (fBp, fA, dBpA, rpB),
    }
    for name, (fx, fy, dxy, r) in anchors.items():
        lat = space.latitude(fx, fy, dxy, r)
        node = space.rightmost(fx, fy, lat)
        eq.v[name] = node
        eq.v_base[name] = space.base_vertex(space.cov.nodes[node])

    if want_flipped:
        dBBp = space.pair_distance(fB, fBp)
        uA, uB, uBp = _halves_even(dAB + dBpA - dBBp, dAB + dBBp - dBpA,
                                   dBpA + dBBp - dAB)
        tB, tC, tBp = _halves_even(dBC + dBBp - dCBp, dBC + dCBp - dBBp,
                                   dCBp + dBBp - dBC)
        eq.pair["BB'"] = dBBp
        eq.u = {"u_A": uA, "u_B": uB, "u_B'": uBp}
        eq.t = {"t_B": tB, "t_C": tC, "t_B'": tBp}
        flipped = {
            "AB": (fA, fB, dAB, uA),
            "BB'": (fB, fBp, dBBp, uB),
            "B'A": (fBp, fA, dBpA, uBp),
            "BC": (fB, fC, dBC, tB),
            "CB'": (fC, fBp, dCBp, tC),
            "B'B": (fBp, fB, dBBp, tBp),
        }
        eq.w = {}
        eq.w_base = {}
        for name, (fx, fy, dxy, r) in flipped.items():
            lat = space.latitude(fx, fy, dxy, r)
            node = space.rightmost(fx, fy, lat)
            eq.w[name] = node
            eq.w_base[name] = space.base_vertex(space.cov.nodes[node])
    return eq


def equilibrium_data(m, pad=None):
    """Equilibrium latitudes and vertices of a map with three tight
    boundaries."""
    m = _normalized(m)
    two = {x: m.boundary_length(x) for x in "ABC"}
    want = (two["B"] == max(two.values())
            and 2 * two["B"] >= sum(two.values()))
    return _with_retries(m, pad,
                         lambda sp: _compute_equilibrium(sp, want))


def _with_retries(m, pad, job):
    # start with a small cover and enlarge on inconclusive walks
    pads = (pad,) if pad is not None else (-4, -2, 0, 2)
    last = None
    for p in pads:
        try:
            return job(_Space(m, pad=p))
        except (DecompositionError, CoverError) as exc:
            if getattr(exc, "reason", "") != "inconclusive":
                raise
            last = exc
    raise DecompositionError(
        "inconclusive", "cover radius exhausted: %s" % (last,))


# -- the disassembly ----------------------------------------------------

def _pieces_type_I(space, eq):
    fA, fB, fC, fBp = (space.F[x] for x in ("A", "B", "C", "B'"))
    wAB = space.wall(fA, fB, eq.v["AB"])
    wBC = space.wall(fB, fC, eq.v["BC"])
    wCA = space.wall(fC, fA, eq.v["CA"])
    wAC = space.wall(fA, fC, eq.v["AC"])
    wCBp = space.wall(fC, fBp, eq.v["CB'"])
    wBpA = space.wall(fBp, fA, eq.v["B'A"])
    tA = space.trans["A"]
    backC = inv_word(space.trans["C"])
    # walls of the outer quadrangles: deck translates of the primed
    # triangle's sides, presented from the untranslated boundaries
    wBA = _Wall(_Shifted(space, wBpA.y, tA, fA),
                _Shifted(space, wBpA.x, tA, fB))
    wBpC = _Wall(_Shifted(space, wBC.x, backC, fBp),
                 _Shifted(space, wBC.y, backC, fC))

    t1 = _triangle_piece(space, [(wAB, "c12"), (wBC, "c23"),
                                 (wCA, "c31")])
    t2 = _triangle_piece(space, [(wAC, "c12"), (wCBp, "c23"),
                                 (wBpA, "c31")])
    # diangle x-halves run toward the exceedance boundary (A, A, B')
    d1 = _diangle_piece(space, wCA.flip(), wAC)
    d2 = _diangle_piece(space, wBA, wAB)
    d3 = _diangle_piece(space, wCBp.flip(), wBpC)
    return [d1, d2, d3], [t1, t2]


def _pieces_type_II(space, eq):
    fA, fB, fC, fBp = (space.F[x] for x in ("A", "B", "C", "B'"))
    wAB = space.wall(fA, fB, eq.w["AB"])
    wBBp = space.wall(fB, fBp, eq.w["BB'"])
    wBpA = space.wall(fBp, fA, eq.w["B'A"])
    wBC = space.wall(fB, fC, eq.w["BC"])
    wCBp = space.wall(fC, fBp, eq.w["CB'"])
    wBpB = space.wall(fBp, fB, eq.w["B'B"])
    backA = inv_word(space.trans["A"])
    tC = space.trans["C"]
    # fourth-corner anchors: the back-A-translate of the (A, B) wall
    # and the C-translate of the (C, B') wall
    wABp = _Wall(_Shifted(space, wAB.y, backA, fBp),
                 _Shifted(space, wAB.x, backA, fA))
    wCB = _Wall(_Shifted(space, wCBp.y, tC, fB),
                _Shifted(space, wCBp.x, tC, fC))

    t1 = _triangle_piece(space, [(wBpA, "c12"), (wAB, "c23"),
                                 (wBBp, "c31")])
    t2 = _triangle_piece(space, [(wBpB, "c12"), (wBC, "c23"),
                                 (wCBp, "c31")])
    # exceedance sides: D1 toward B', D2 toward B', D3 toward C
    d1 = _diangle_piece(space, wBBp.flip(), wBpB)
    d2 = _diangle_piece(space, wABp, wBpA)
    d3 = _diangle_piece(space, wBC.flip(), wCB.flip())
    return [d1, d2, d3], [t1, t2]


def disassemble(m, proc=None):
    """Cut a map with three tight boundaries into its quintuple.

    Returns a Quintuple whose assembly (with the same procedure)
    rebuilds the map; the result carries ``proc``, ``permutation``
    (the cyclic label renaming applied before cutting) and
    ``equilibrium`` attributes.
    """
    m0 = _normalized(m)
    two = {x: m0.boundary_length(x) for x in "ABC"}
    kind = map_type(two["A"], two["B"], two["C"])
    if proc is None:
        proc = "I" if kind in ("I", "both") else "II"
    if proc not in ("I", "II"):
        raise DecompositionError("bad-input", "unknown procedure %r" % proc)
    if (proc == "I" and kind == "II") or (proc == "II" and kind == "I"):
        raise DecompositionError(
            "wrong-type",
            "boundary lengths require procedure %s" % kind)
    perm = _CYCLES[0]
    work = m0
    if proc == "II":
        perm = _perm_longest_to_b(two)
        if perm is not _CYCLES[0]:
            work = _relabel(m0, perm)

    def job(space):
        eq = _compute_equilibrium(space, proc == "II")
        if proc == "I":
            diangles, triangles = _pieces_type_I(space, eq)
        else:
            diangles, triangles = _pieces_type_II(space, eq)
        return eq, diangles, triangles

    eq, diangles, triangles = _with_retries(work, None, job)
    q = Quintuple(diangles, triangles)
    la, lb, lc = (work.boundary_length(x) for x in "ABC")
    if proc == "I":
        expect = _halves_even(la + lc - lb, la + lb - lc, lb + lc - la)
    else:
        expect = [(lb - la - lc) // 2, la, lc]
    if q.exceedances != expect:
        raise DecompositionError(
            "internal", "exceedances %r, expected %r"
            % (q.exceedances, expect))
    q.proc = proc
    q.permutation = dict(perm)
    q.equilibrium = eq
    return q


def reassemble(q, proc=None, permutation=None):
    """Assemble a quintuple and undo the label permutation recorded by
    disassemble, recovering the original labeling."""
    from . import assembly
    if proc is None:
        proc = getattr(q, "proc", "I")
    if permutation is None:
        permutation = getattr(q, "permutation", _CYCLES[0])
    m = assembly.assemble(q, proc)
    inverse = {permutation[x]: x for x in permutation}
    return _relabel(m, inverse)


# -- triply pointed fast path ------------------------------------------

def disassemble_triply_pointed(m):
    """Disassembly of a map whose three boundaries are all vertices,
    computed directly on the sphere: distances are plain graph
    distances and the fourth corner of the fundamental domain
    degenerates to the second extreme element of each geodesic vertex
    set.  The output matches disassemble(m, 'I')."""
    m = _normalized(m)
    for x in "ABC":
        if m.boundaries[x].kind != "vertex":
            raise DecompositionError(
                "bad-input", "boundary %r is not a vertex" % x)
    return _SphereSpace(m).disassemble()


class _SphereHalf:
    """A leftmost descending path on the sphere."""

    def __init__(self, m, v0, path, start_value):
        self.m = m
        self.v0 = v0
        self.darts = path
        self.start_value = start_value

    def vertex(self, i):
        if i == 0:
            return self.v0
        return self.m.vertex_of[self.m.alpha[self.darts[i - 1]]]


class _SphereSpace:
    """Disassembly of a triply pointed map without building a cover."""

    def __init__(self, m):
        self.m = m
        self.vert = {x: m.boundary_target(x)[1] for x in "ABC"}
        self.dist = {x: geodesy.distances(m, [self.vert[x]])
                     for x in "ABC"}
        self.lim = 40 + 4 * max(1, m.n)
        dAB = self.dist["A"][self.vert["B"]]
        dBC = self.dist["B"][self.vert["C"]]
        dCA = self.dist["C"][self.vert["A"]]
        self.dpair = {"AB": dAB, "BA": dAB, "BC": dBC, "CB": dBC,
                      "CA": dCA, "AC": dCA}
        rA, rB, rC = _halves_even(dAB + dCA - dBC, dAB + dBC - dCA,
                                  dBC + dCA - dAB)
        self.r = {"A": rA, "B": rB, "C": rC}

    def latitude(self, x, y):
        dx, dy = self.dist[x], self.dist[y]
        dxy = self.dpair[x + y]
        r = self.r[x]
        out = [v for v in range(self.m.num_vertices)
               if dx[v] + dy[v] == dxy and dx[v] == r]
        if not out:
            raise DecompositionError("internal", "empty geodesic set")
        return out

    def _toward(self, v, z):
        """A dart at v descending toward the marked vertex z, used as
        the rotation anchor when paths merge at a marked vertex."""
        dz = self.dist[z]
        down = [d for d in self.m.vertex_darts(v)
                if dz[self.m.vertex_of[self.m.alpha[d]]] == dz[v] - 1]
        if not down:
            raise DecompositionError("degenerate",
                                     "no descent at a marked vertex")
        return min(down)

    def _launch(self, v, x, y):
        dx, dy = self.dist[x], self.dist[y]
        if v == self.vert[x] and v == self.vert[y]:
            raise DecompositionError("internal", "collapsed launch")
        if v == self.vert[x]:
            return None, self._toward(v, y)
        if v == self.vert[y]:
            return self._toward(v, x), None
        return geodesy.launch_darts(self.m, v, dx, dy)

    def _half(self, first, v, x):
        dfield = self.dist[x]
        if first is None:
            return _SphereHalf(self.m, v, [], dfield[v])
        return _SphereHalf(self.m, v,
                           geodesy.leftmost_descent(self.m, first, dfield),
                           dfield[v])

    def merge(self, hu, hv):
        """First common vertex of two descending paths, synchronized
        by distance level."""
        lev = min(hu.start_value, hv.start_value)
        while lev >= 0:
            iu = hu.start_value - lev
            iv = hv.start_value - lev
            if hu.vertex(iu) == hv.vertex(iv):
                return iu, iv
            lev -= 1
        raise DecompositionError("internal", "sphere halves never merge")

    def _cmp(self, x, z, hu, hv):
        """Transversal comparison of two descending paths toward the
        marked vertex x; at the merge vertex, arrivals are compared
        counterclockwise from the continuation (or from the direction
        of the third marked vertex z when the merge is at x itself)."""
        m = self.m
        iu, iv = self.merge(hu, hv)
        if iu == 0 or iv == 0:
            return -1 if iu == 0 else 1
        au = m.alpha[hu.darts[iu - 1]]
        av = m.alpha[hv.darts[iv - 1]]
        v = m.vertex_of[au]
        if self.dist[x][v] > 0:
            o = geodesy._leftmost_step(m, au, self.dist[x])
        else:
            o = self._toward(v, z)
        d = m.sigma[o]
        for _ in range(self.lim):
            if d == au:
                return -1
            if d == av:
                return 1
            d = m.sigma[d]
        raise DecompositionError("internal", "arrivals not found")

    def extremal_walls(self, x, y):
        """The walls at the two extreme elements of the geodesic
        vertex set of the pair (x, y): the pair straddling the
        direction of the third marked vertex.  Returns (wall at v_xy,
        wall at v_yx), each with halves (toward x, toward y)."""
        z = next(c for c in "ABC" if c not in (x, y))
        lat = self.latitude(x, y)
        halves = {}
        for v in lat:
            sx, sy = self._launch(v, x, y)
            halves[v] = (self._half(sx, v, x), self._half(sy, v, y))
        order = sorted(lat, key=functools.cmp_to_key(
            lambda u, v: self._cmp(x, z, halves[u][0], halves[v][0])))
        hi, lo = (order[-1], order[0]) if _SEL_MAX else \
            (order[0], order[-1])
        return _Wall(*halves[hi]), _Wall(*halves[lo])

    def disassemble(self):
        walls = {}
        for x, y in (("A", "B"), ("B", "C"), ("C", "A")):
            whi, wlo = self.extremal_walls(x, y)
            walls[x + y] = whi
            walls[y + x] = wlo.flip()

        t1 = self._triangle([(walls["AB"], "c12"), (walls["BC"], "c23"),
                             (walls["CA"], "c31")])
        t2 = self._triangle([(walls["AC"], "c12"), (walls["CB"], "c23"),
                             (walls["BA"], "c31")])
        d1 = self._diangle(walls["CA"].flip(), walls["AC"])
        d2 = self._diangle(walls["BA"].flip(), walls["AB"])
        d3 = self._diangle(walls["CB"].flip(), walls["BC"])
        q = Quintuple([d1, d2, d3], [t1, t2])
        q.proc = "I"
        q.permutation = dict(_CYCLES[0])
        return q

    def _triangle(self, sides):
        alpha = self.m.alpha
        apices = ("c1", "c2", "c3")
        merges = []
        for i, (wall, mark) in enumerate(sides):
            prev = sides[i - 1][0]
            merges.append(self.merge(wall.x, prev.y))
        segs = []
        for i, (wall, mark) in enumerate(sides):
            iu, _ = merges[i]
            _, jv = merges[(i + 1) % 3]
            segs.append((apices[i], _segment(wall.x, iu, True, alpha)))
            segs.append((mark, _segment(wall.y, jv, False, alpha)))
        return _build_piece(self.m, "triangle", segs)

    def _diangle(self, wall_p, wall_q):
        alpha = self.m.alpha
        ixp, ixq = self.merge(wall_p.x, wall_q.x)
        iyp, iyq = self.merge(wall_p.y, wall_q.y)
        segs = [
            ("c1", _segment(wall_p.x, ixp, True, alpha)),
            ("c12", _segment(wall_p.y, iyp, False, alpha)),
            ("c2", _segment(wall_q.y, iyq, True, alpha)),
            ("c21", _segment(wall_q.x, ixq, False, alpha)),
        ]
        return _build_piece(self.m, "diangle", segs)

"""Cut-and-glue surgery on dart maps.

Three primitives drive every bijection in this package:

* ``extract_piece`` reads off the closed region lying on the left of a
  contour walk and returns it as a standalone map (the inverse of a
  cut along a path or a system of paths); ``cut_piece`` is the variant
  for contours that are projections of embedded walks in a cover, where
  repeated visits stand for distinct lifts;
* ``MapBuilder.corner_glue`` identifies two boundary corners, merging
  the incident vertices and splicing their rotations;
* ``MapBuilder.fold`` folds two consecutive edges of a face onto each
  other, the local step of zipping a face shut edge by edge.

All three are pure combinatorial operations on the (alpha, sigma)
encoding; orientation conventions follow mapcore (sigma is the
counterclockwise rotation, faces lie on the right of their contour
darts).
"""

from .mapcore import PlanarMap, BoundaryRef


def extract_piece(m, contour, boundary_label="outer"):
    """Extract the closed region on the left of a contour walk.

    ``contour`` is a cyclic list of darts of ``m``, each traversed from
    its base vertex, consecutive in the sense that the base of
    ``contour[i+1]`` is the endpoint of ``contour[i]``.  The region to
    keep lies on the left of the walk; the walk itself becomes the
    contour of the single boundary face of the result (faces lie on
    the right of their contour darts, so the extracted contour is the
    new boundary face's orbit).

    Returns ``(piece, old_to_new)``.  The walk may visit a vertex
    several times (pinch points); the region may even be degenerate
    (a path traversed out and back).
    """
    if not contour:
        raise ValueError("empty contour")
    k = len(contour)
    for i in range(k):
        if m.vertex_of[contour[(i + 1) % k]] != m.vertex_of[m.alpha[contour[i]]]:
            raise ValueError("contour is not a closed walk at position %d" % i)

    # Left sector at each visit: departure dart q, arrival dart p;
    # allowed darts run counterclockwise from q to alpha(p) inclusive.
    allowed = set()
    sector_vertices = set()
    for i in range(k):
        q = contour[i]
        r = m.alpha[contour[i - 1]]
        sector_vertices.add(m.vertex_of[q])
        d = q
        allowed.add(d)
        guard = 0
        while d != r:
            d = m.sigma[d]
            allowed.add(d)
            guard += 1
            if guard > m.n:
                raise ValueError("contour sectors are inconsistent")

    # Close under alpha, absorbing whole interior vertices.
    stack = list(allowed)
    while stack:
        d = stack.pop()
        a = m.alpha[d]
        if a in allowed:
            continue
        v = m.vertex_of[a]
        if v in sector_vertices:
            raise ValueError(
                "edge of dart %d crosses the contour" % d)
        e = a
        while True:
            if e not in allowed:
                allowed.add(e)
                stack.append(e)
            e = m.sigma[e]
            if e == a:
                break

    old = sorted(allowed)
    new = {d: i for i, d in enumerate(old)}
    alpha = [new[m.alpha[d]] for d in old]
    sigma = [0] * len(old)
    for d in old:
        nxt = m.sigma[d]
        while nxt not in allowed:
            nxt = m.sigma[nxt]
        sigma[new[d]] = new[nxt]
    zero = [new[d] for d in m.zero_length if d in allowed]
    piece = PlanarMap(alpha, sigma,
                      {boundary_label: BoundaryRef("face", new[contour[0]])},
                      zero)
    # The contour must come out as one face orbit of the piece.
    got = piece.face_contours()[piece.face_of[new[contour[0]]]]
    want = [new[d] for d in contour]
    if sorted(got) != sorted(want):
        raise ValueError("extracted contour is not a face of the piece")
    start = got.index(want[0])
    if [got[(start + i) % k] for i in range(k)] != want:
        raise ValueError("extracted contour disagrees with the face orbit")
    return piece, new


def cut_piece(m, contour, boundary_label="outer"):
    """Cut out the region on the left of a contour that may run along
    itself.

    Unlike ``extract_piece``, a vertex visited several times is split
    into one copy per visit and an edge whose two darts both appear on
    the contour is doubled.  This is the right notion when the contour
    is the projection of an embedded walk in a cover of ``m``: the
    repeated visits stand for distinct lifts, and the cut region is a
    band bounded by the lifted walk.

    Returns ``(piece, old_to_new)`` where ``old_to_new`` maps each
    contour dart of ``m`` to the piece dart of the corresponding visit
    (and interior darts to their unique copies).
    """
    if not contour:
        raise ValueError("empty contour")
    k = len(contour)
    if len(set(contour)) != k:
        raise ValueError("contour repeats a dart")
    pos = {d: i for i, d in enumerate(contour)}
    for i in range(k):
        if m.vertex_of[contour[(i + 1) % k]] != m.vertex_of[m.alpha[contour[i]]]:
            raise ValueError("contour is not a closed walk at position %d" % i)

    # Piece darts are keyed by ("b", i) for the i-th contour dart,
    # ("p", i) for the fresh inner partner of a doubled edge, and by
    # the plain dart otherwise.
    def partner(i):
        a = m.alpha[contour[i]]
        return ("p", i) if a in pos else a

    # One vertex copy per visit.  The boundary face of the piece must
    # traverse the contour in order, which forces each copy to close
    # with the arrival dart of its own visit; contour darts of other
    # visits met on the way belong to other copies and are skipped.
    # A visit arriving and departing through the same dart is a pinch
    # of zero angular width.
    sector_vertices = set()
    rings = []
    claimed = set()
    for i in range(k):
        q = contour[i]
        r = m.alpha[contour[i - 1]]
        sector_vertices.add(m.vertex_of[q])
        ring = [("b", i)]
        if r != q:
            d = m.sigma[q]
            guard = 0
            while d != r:
                if d not in pos and m.alpha[d] not in pos:
                    if d in claimed:
                        raise ValueError(
                            "contour sectors are inconsistent at dart %d" % d)
                    claimed.add(d)
                    ring.append(d)
                d = m.sigma[d]
                guard += 1
                if guard > m.n:
                    raise ValueError("contour sectors are inconsistent")
        ring.append(partner((i - 1) % k))
        rings.append(ring)

    # Absorb whole interior vertices reached across claimed edges.
    allowed = set(claimed)
    stack = list(claimed)
    while stack:
        d = stack.pop()
        a = m.alpha[d]
        if a in allowed:
            continue
        v = m.vertex_of[a]
        if v in sector_vertices:
            raise ValueError("edge of dart %d crosses the contour" % d)
        e = a
        while True:
            if e not in allowed:
                allowed.add(e)
                stack.append(e)
            e = m.sigma[e]
            if e == a:
                break
    interior_vertices = sorted({m.vertex_of[d] for d in allowed}
                               - sector_vertices)
    for v in interior_vertices:
        rings.append(list(m.vertex_darts(v)))

    keys = [key for ring in rings for key in ring]
    new = {key: t for t, key in enumerate(keys)}
    n = len(keys)
    sigma = [0] * n
    for ring in rings:
        for t, key in enumerate(ring):
            sigma[new[key]] = new[ring[(t + 1) % len(ring)]]
    alpha = [None] * n
    for i in range(k):
        alpha[new[("b", i)]] = new[partner(i)]
        alpha[new[partner(i)]] = new[("b", i)]
    for d in allowed:
        if alpha[new[d]] is None:
            alpha[new[d]] = new[m.alpha[d]]
            alpha[new[m.alpha[d]]] = new[d]

    def source(key):
        if isinstance(key, tuple):
            d = contour[key[1]]
            return d if key[0] == "b" else m.alpha[d]
        return key

    zero = [t for t, key in enumerate(keys) if source(key) in m.zero_length]
    piece = PlanarMap(alpha, sigma,
                      {boundary_label: BoundaryRef("face", new[("b", 0)])},
                      zero)
    got = piece.face_contours()[piece.face_of[new[("b", 0)]]]
    want = [new[("b", i)] for i in range(k)]
    start = got.index(want[0])
    if len(got) != k or [got[(start + i) % k] for i in range(k)] != want:
        raise ValueError("extracted contour is not a face of the piece")
    old_to_new = {}
    for d in allowed:
        old_to_new[d] = new[d]
    for i in range(k):
        key = partner(i)
        if not isinstance(key, tuple):
            old_to_new[key] = new[key]
    for i in range(k):
        old_to_new[contour[i]] = new[("b", i)]
    return piece, old_to_new


class MapBuilder:
    """A mutable (alpha, sigma) structure for gluing constructions.

    Darts are arbitrary integer keys; deleted darts simply disappear.
    ``resolve`` tracks darts deleted by folds so that external
    references (marked corners, boundary roots) can be carried through
    a sequence of operations.
    """

    def __init__(self):
        self.alpha = {}
        self.sigma = {}
        self.sigma_inv = {}
        self.zero = set()
        self._resolve = {}
        self._next = 0

    @classmethod
    def from_map(cls, m):
        b = cls()
        b.add_disjoint(m)
        return b

    def add_disjoint(self, m):
        """Add a disjoint copy of ``m``; returns the dart id offset."""
        off = self._next
        for d in range(m.n):
            self.alpha[off + d] = off + m.alpha[d]
            self.sigma[off + d] = off + m.sigma[d]
            self.sigma_inv[off + m.sigma[d]] = off + d
        for d in m.zero_length:
            self.zero.add(off + d)
        self._next = off + m.n
        return off

    def resolve(self, d):
        """Follow fold identifications to a surviving dart."""
        while d not in self.alpha:
            d = self._resolve[d]
        return d

    def corner_glue(self, c1, c2):
        """Identify the corners before darts ``c1`` and ``c2``.

        The two incident vertices merge; the rotation of the second fan
        is spliced into the corner sector of the first (and vice
        versa).  Works both across components and within one face.
        """
        c1 = self.resolve(c1)
        c2 = self.resolve(c2)
        if c1 == c2:
            raise ValueError("cannot glue a corner to itself")
        p1 = self.sigma_inv[c1]
        p2 = self.sigma_inv[c2]
        self._set_sigma(p1, c2)
        self._set_sigma(p2, c1)

    def fold(self, d1):
        """Fold the next edge on the face of ``d1`` onto the edge of
        ``d1`` itself.

        With d2 = phi(d1) (the face lies on the right of both), the two
        polygon sides d1 and d2 are glued together: their far endpoints
        merge, the pivot corner between them becomes interior, and the
        surviving edge is the dart pair (alpha(d1), alpha(d2)).  The
        deleted darts resolve to their images: d1 to alpha(d2) and d2
        to alpha(d1).
        """
        d1 = self.resolve(d1)
        a1 = self.alpha[d1]
        d2 = self.sigma[a1]          # phi(d1)
        if d2 == d1:
            raise ValueError("folding a face of degree one")
        if d2 == a1:
            raise ValueError("cannot fold an edge onto itself")
        a2 = self.alpha[d2]
        # u is the face predecessor of d1; u == d2 exactly when the
        # face is a two-gon, which disappears entirely.
        u = self.alpha[self.sigma_inv[d1]]
        pnext = self.sigma[a2]       # phi(d2), old face successor of d2
        # new pairing: the glued sides leave, their partners pair up
        self.alpha[a1] = a2
        self.alpha[a2] = a1
        # new face successors of the surviving darts whose position in
        # a face changed; everything is expressed through
        # sigma = phi o alpha on the new pairing
        phi_a1 = pnext if a1 == u else self.sigma[d1]
        phi_a2 = pnext if a2 == u else self.sigma[d2]
        sigma_updates = [(a2, phi_a1), (a1, phi_a2)]
        if u not in (d2, a1, a2):
            sigma_updates.append((self.alpha[u], pnext))
        zflag = (d1 in self.zero, d2 in self.zero)
        if zflag[0] != zflag[1]:
            raise ValueError("folding a unit edge onto a zero-length one")
        for dead in (d2, d1):
            del self.alpha[dead]
            self.sigma.pop(dead, None)
            self.zero.discard(dead)
        self.sigma_inv.pop(d1, None)
        self.sigma_inv.pop(d2, None)
        for d, e in sigma_updates:
            self._set_sigma(d, e)
        self._resolve[d1] = a2
        self._resolve[d2] = a1

    def _set_sigma(self, d, e):
        self.sigma[d] = e
        self.sigma_inv[e] = d

    def vertex_darts(self, d):
        out = [d]
        e = self.sigma[d]
        while e != d:
            out.append(e)
            e = self.sigma[e]
        return out

    def face_contour(self, d):
        out = [d]
        e = self.sigma[self.alpha[d]]
        while e != d:
            out.append(e)
            e = self.sigma[self.alpha[e]]
        return out

    def finalize(self, boundaries):
        """Compact into a PlanarMap.  ``boundaries`` maps labels to
        BoundaryRef values whose darts may be stale (pre-fold)."""
        old = sorted(self.alpha)
        new = {d: i for i, d in enumerate(old)}
        alpha = [new[self.alpha[d]] for d in old]
        sigma = [new[self.sigma[d]] for d in old]
        bnd = {}
        for label, ref in boundaries.items():
            dart = new[self.resolve(ref.dart)] if ref.dart is not None else None
            root = new[self.resolve(ref.root)] if ref.root is not None else None
            bnd[label] = BoundaryRef(ref.kind, dart, root)
        zero = [new[d] for d in self.zero]
        return PlanarMap(alpha, sigma, bnd, zero), new

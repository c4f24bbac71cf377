"""Universal cover of a map with three boundaries.

The triply punctured sphere is tiled by squares indexed by the free
group F on two letters a, c; a map drawn on the sphere lifts to an
infinite map on the cover.  Combinatorially the lift is driven by
crossing labels: a system of two dual arcs (one from boundary A to
boundary B, one from C to B) marks each crossed edge with a letter,
and walking a dart multiplies the current word on the right by its
label.  Boundary-vertices are blown up to cycles of zero-length
marker edges; their lifts spiral around ideal vertices and are
identified eagerly, one node per coset of the marker cycle's deck
element.

Words are stored as reduced strings over "a", "c" and their inverses
"A", "C".
"""

from collections import deque

from . import geodesy


class CoverError(RuntimeError):
    def __init__(self, reason, message=None):
        super().__init__(message or reason)
        self.reason = reason


# -- free group words --------------------------------------------------

_INV = {"a": "A", "A": "a", "c": "C", "C": "c"}

# deck element attached to each boundary position: the first boundary
# label (sorted) gets a, the second b = a^-1 c^-1, the third c
GEN_WORDS = ("a", "AC", "c")


def reduce_word(w):
    out = []
    for ch in w:
        if out and out[-1] == _INV[ch]:
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def inv_word(w):
    return "".join(_INV[ch] for ch in reversed(w))


def mul(w1, w2):
    i = 0
    n = min(len(w1), len(w2))
    while i < n and w1[len(w1) - 1 - i] == _INV[w2[i]]:
        i += 1
    return w1[:len(w1) - i] + w2[i:]


def cyclic_reduce(w):
    while len(w) >= 2 and w[0] == _INV[w[-1]]:
        w = w[1:-1]
    return w


def conjugacy_class(w):
    """Canonical representative of the conjugacy class: the smallest
    rotation of the cyclic reduction."""
    w = cyclic_reduce(reduce_word(w))
    if not w:
        return ""
    return min(w[i:] + w[:i] for i in range(len(w)))


def rotations(w):
    return sorted({w[i:] + w[:i] for i in range(len(w))}) if w else [""]


def coset_canon(u, p):
    """Canonical representative of the right coset u<p>: the
    (len, lex)-smallest element of {u p^n}."""
    if not p:
        return u
    best = u
    for step in (p, inv_word(p)):
        cur = u
        for _ in range(2 * len(u) + 2 * len(p) + 2):
            cur = mul(cur, step)
            if (len(cur), cur) < (len(best), best):
                best = cur
            if len(cur) > len(best) + 2 * len(p):
                break
    return best


def left_canon(w, p):
    """((len, lex)-smallest element of {p^n w}, exponent n achieving
    it).  Left cosets fold the period direction of a quotient."""
    if not p:
        return w, 0
    best, best_n = w, 0
    for step, sign in ((p, 1), (inv_word(p), -1)):
        cur, n = w, 0
        for _ in range(2 * len(w) + 2 * len(p) + 2):
            cur = mul(step, cur)
            n += sign
            if (len(cur), cur) < (len(best), best):
                best, best_n = cur, n
            if len(cur) > len(best) + 2 * len(p):
                break
    return best, best_n


# -- arc system and crossing labels ------------------------------------

class ArcSystem:
    """Two dual arcs on the blown-up map: arc_a from the first
    boundary face to the second, arc_c from the third to the second.
    Each arc is the list of darts crossed, oriented with the
    previously visited face on the right; the arcs are edge-disjoint
    when possible, else share edges with composed labels."""

    def __init__(self, mb, order, arc_a, arc_c):
        self.map = mb
        self.order = order          # the three boundary labels, sorted
        self.arc_a = arc_a
        self.arc_c = arc_c


class CrossingLabels:
    """Crossing label word per dart; identity is ''.  A dart crossed
    by both arcs carries a two-letter word."""

    def __init__(self, mb, labels):
        self.map = mb
        self.labels = labels

    def label(self, dart):
        return self.labels.get(dart, "")

    def word(self, darts):
        w = ""
        for d in darts:
            w = mul(w, self.label(d))
        return w


def _arc_label_variants(mb, arc_a, arc_c):
    """Label assignments for a pair of dual arcs.  Each crossing of a
    dart contributes one letter; when both arcs cross the same edge
    the two letters compose in the order the arcs are met, which is
    not determined combinatorially, so both orders are produced."""
    letters = {}
    for arc, letter in ((arc_a, "a"), (arc_c, "c")):
        for d in arc:
            e = min(d, mb.alpha[d])
            letters.setdefault(e, []).append(
                letter if d == e else _INV[letter])
    shared = sorted(e for e, ls in letters.items() if len(ls) > 1)
    for mask in range(1 << len(shared)):
        labels = {}
        for e, ls in letters.items():
            word = "".join(ls)
            if e in shared and mask >> shared.index(e) & 1:
                word = "".join(reversed(ls))
            labels[e] = word
            labels[mb.alpha[e]] = inv_word(word)
        yield labels


def _face_invariant_violations(mb, labels, order):
    """Check the label products around all faces: inner faces must give
    the identity class, boundary faces their deck element's class."""
    lab = CrossingLabels(mb, labels)
    want = {}
    for label, gen in zip(order, GEN_WORDS):
        kind, f = mb.boundary_target(label)
        want[f] = conjugacy_class(gen)
    bad = []
    for f, contour in enumerate(mb.face_contours()):
        w = conjugacy_class(lab.word(contour))
        expect = want.get(f, "")
        if w != expect:
            bad.append((f, w, expect))
    return bad


def build_arc_system(m):
    """Find an arc system for a map with three boundaries; returns
    (ArcSystem, CrossingLabels) on the blown-up map.

    The search walks dual paths (sequences of crossed edges) from the
    first boundary face to the second and from the third to the
    second, and accepts the first pair whose face label products
    satisfy the crossing invariants.
    """
    order = sorted(m.boundaries)
    if len(order) != 3:
        raise CoverError("wrong-boundary-count",
                         "need exactly three boundaries")
    mb = m.blowup_boundary_vertices()
    faces = mb.face_contours()
    fid = {}
    for label in order:
        kind, f = mb.boundary_target(label)
        fid[label] = f
    fa, fb, fc = fid[order[0]], fid[order[1]], fid[order[2]]

    # crossing dart d leaves the face on its right (face_of[d]) for
    # the face on its left (face_of[alpha[d]])
    by_face = {i: list(cont) for i, cont in enumerate(faces)}

    def dual_paths(src, dst, banned_edges, max_len):
        out = []

        def rec(f, path, used):
            if len(out) >= 4000:
                return
            if f == dst:
                out.append(list(path))
                return
            if len(path) >= max_len:
                return
            for d in by_face[f]:
                e = min(d, mb.alpha[d])
                if e in used or e in banned_edges:
                    continue
                g = mb.face_of[mb.alpha[d]]
                path.append(d)
                used.add(e)
                rec(g, path, used)
                used.discard(e)
                path.pop()

        rec(src, [], set())
        out.sort(key=len)
        return out

    max_len = mb.num_edges
    for allow_shared in (False, True):
        for pa in dual_paths(fa, fb, set(), max_len):
            banned = set() if allow_shared else \
                {min(d, mb.alpha[d]) for d in pa}
            for pc in dual_paths(fc, fb, banned, max_len):
                for labels in _arc_label_variants(mb, pa, pc):
                    if not _face_invariant_violations(mb, labels, order):
                        return (ArcSystem(mb, order, pa, pc),
                                CrossingLabels(mb, labels))
    raise CoverError("no-good-embedding",
                     "no valid arc system found")


def homotopy_word(m, labels, cycle):
    """Conjugacy class of a closed dart path on the labeled map."""
    mb = labels.map
    if cycle:
        for d, d2 in zip(cycle, cycle[1:] + cycle[:1]):
            if mb.vertex_of[mb.alpha[d]] != mb.vertex_of[d2]:
                raise CoverError("open-path", "not a closed dart path")
    return conjugacy_class(labels.word(cycle))


def generator_class(m, label):
    order = sorted(m.boundaries)
    return conjugacy_class(GEN_WORDS[order.index(label)])


# -- cover geometry ----------------------------------------------------

class _MarkerCycle:
    """Bookkeeping for one blown-up boundary-vertex: the marker face
    contour rotated to start at its smallest vertex, the label product
    p around it, and for each marker vertex the product q from there
    to the reference vertex."""

    def __init__(self, mb, labels, label, face):
        cycle = mb.face_contours()[face]
        verts = [mb.vertex_of[d] for d in cycle]
        j0 = verts.index(min(verts))
        self.cycle = cycle[j0:] + cycle[:j0]
        self.verts = verts[j0:] + verts[:j0]
        self.label = label
        self.p = labels.word(self.cycle)
        self.q = {}
        self.pos = {}
        for j, v in enumerate(self.verts):
            self.q[v] = labels.word(self.cycle[j:])
            self.pos[v] = j


class CoverGeometry:
    """Shared lifting machinery: node keys, ideal identifications and
    neighbor generation for searches on the universal cover.

    Node keys are ('r', v, w) for regular base vertices and
    ('i', label, coset) for ideal vertices; the coset key is the word
    transported to the marker cycle's reference vertex, canonical in
    its right coset of the cycle's deck element."""

    def __init__(self, m, labels):
        self.base = m
        mb = labels.map
        self.map = mb
        self.labels = labels
        self.order = sorted(m.boundaries)
        self.gen = {lab: g for lab, g in zip(self.order, GEN_WORDS)}
        self.marker = {}
        self.marker_of = {}
        for lab in self.order:
            if m.boundaries[lab].kind != "vertex":
                continue
            kind, f = mb.boundary_target(lab)
            mc = _MarkerCycle(mb, labels, lab, f)
            self.marker[lab] = mc
            for v in mc.verts:
                self.marker_of[v] = mc

    def node_key(self, v, w):
        mc = self.marker_of.get(v)
        if mc is None:
            return ("r", v, w)
        u = mul(w, mc.q[v])
        return ("i", mc.label, coset_canon(u, mc.p))

    def stands_for(self, key, maxlen):
        """The (base vertex, word) pairs a node represents, with words
        of length at most maxlen."""
        if key[0] == "r":
            return [(key[1], key[2])]
        mc = self.marker[key[1]]
        u = key[2]
        out = []
        seen = set()
        for step in (None, mc.p, inv_word(mc.p)):
            w_ref = u
            while True:
                if step is not None:
                    w_ref = mul(w_ref, step)
                if len(w_ref) > maxlen + len(mc.p) + 2:
                    break
                for v in mc.verts:
                    w = mul(w_ref, inv_word(mc.q[v]))
                    if len(w) <= maxlen and (v, w) not in seen:
                        seen.add((v, w))
                        out.append((v, w))
                if step is None or not mc.p:
                    break
        return out

    def neighbors(self, key, maxlen):
        """Cover edges leaving a node: (key2, cost, dart, source word)."""
        mb = self.map
        out = []
        for v, w in self.stands_for(key, maxlen):
            for d in mb.vertex_darts(v):
                w2 = mul(w, self.labels.label(d))
                if len(w2) > maxlen:
                    continue
                u = mb.vertex_of[mb.alpha[d]]
                out.append((self.node_key(u, w2), mb.edge_length(d), d, w))
        return out

    def ideal_node_key(self, label):
        """The distinguished ideal vertex of a boundary-vertex: the
        lift touching the word-0 copy at the reference marker vertex."""
        mc = self.marker[label]
        return self.node_key(mc.verts[0], "")


# -- truncated cover ---------------------------------------------------

class TruncatedCover:
    """Finite word-radius portion of the universal cover: all nodes
    whose reduced word has length at most W, reachable from the word-0
    copy of the base map."""

    def __init__(self, m, labels, W, cap=200000):
        self.geom = CoverGeometry(m, labels)
        self.base = m
        self.map = self.geom.map
        self.labels = labels
        self.W = W
        self.order = self.geom.order
        self.gen = self.geom.gen
        self.marker = self.geom.marker
        self.nodes = []
        self.index = {}
        self.adj = []
        self._expand(cap)

    def node_key(self, v, w):
        return self.geom.node_key(v, w)

    def _add(self, key):
        i = self.index.get(key)
        if i is None:
            i = len(self.nodes)
            self.index[key] = i
            self.nodes.append(key)
            self.adj.append([])
        return i

    def _expand(self, cap):
        mb = self.map
        seeds = []
        for v in range(mb.num_vertices):
            key = self.node_key(v, "")
            if key not in self.index:
                seeds.append(self._add(key))
        todo = deque(seeds)
        done = set()
        while todo:
            i = todo.popleft()
            if i in done:
                continue
            done.add(i)
            if len(self.nodes) > cap:
                raise CoverError("cap-exceeded",
                                 "cover truncation exceeds %d nodes" % cap)
            for key2, cost, d, w in self.geom.neighbors(
                    self.nodes[i], self.W):
                j = self._add(key2)
                self.adj[i].append((j, cost, d, w))
                if j not in done:
                    todo.append(j)

    # -- queries -------------------------------------------------------

    def node(self, v, w):
        return self.index.get(self.node_key(v, w))

    def ideal_node(self, label):
        return self.index.get(self.geom.ideal_node_key(label))

    def deck(self, word, i):
        """Image of node i under the deck action of ``word`` (left
        multiplication), or None if outside the truncation."""
        key = self.nodes[i]
        if key[0] == "i":
            lab, u = key[1], key[2]
            return self.index.get(
                ("i", lab, coset_canon(mul(word, u), self.marker[lab].p)))
        v, w = key[1], key[2]
        w2 = mul(word, w)
        if len(w2) > self.W:
            return None
        return self.index.get(self.node_key(v, w2))

    def distances(self, sources):
        """0/1 BFS distances (dict node -> int) from node indices."""
        dist = {}
        dq = deque()
        for s in sources:
            if s not in dist:
                dist[s] = 0
                dq.append(s)
        while dq:
            i = dq.popleft()
            di = dist[i]
            for j, cost, d, w in self.adj[i]:
                nd = di + cost
                if j not in dist or nd < dist[j]:
                    dist[j] = nd
                    if cost == 0:
                        dq.appendleft(j)
                    else:
                        dq.append(j)
        return dist


def expand_cover(m, labels=None, W=None, cap=200000):
    if labels is None:
        _, labels = build_arc_system(m)
    if W is None:
        W = default_radius(m, labels)
    return TruncatedCover(m, labels, W, cap=cap)


def default_radius(m, labels):
    """Truncation radius for field computations: the longest boundary
    contour (a path of that length changes the word by at most one
    letter per unit step), labeled zero-length marker darts (which
    change it at zero cost) and a margin of three."""
    two_L = max(m.boundary_length(lab) for lab in m.boundaries)
    mb = labels.map
    maxlab = max((len(w) for w in labels.labels.values()), default=1)
    zero_cost = sum(len(labels.labels.get(d, ""))
                    for d in mb.zero_length)
    return two_L * maxlab + zero_cost + 3


# -- minimal homotopic cycles ------------------------------------------

class CycleCertificate:
    def __init__(self, label, two_l, witness, lift):
        self.label = label
        self.two_l = two_l
        self.witness = witness      # closed dart path on the blown-up map
        self.lift = lift            # node key sequence on the cover

    @property
    def half_length(self):
        return self.two_l // 2


def _capped_search(geom, src_key, targets, cap_dist, state_cap, base_dist):
    """0/1 BFS from src_key over lazily generated cover nodes, pruned
    at distance cap_dist and by the base-map distance lower bound.
    Returns (best target key, distance, predecessor map) or None.

    Exploring the full ball of radius cap_dist makes the answer exact:
    no truncation by word length is involved."""
    # any word met on a useful path is within cap_dist letters (plus
    # zero-cost marker crossings) of the endpoints' words
    maxlen = 2 * cap_dist + 8
    dist = {src_key: 0}
    prev = {}
    dq = deque([src_key])
    while dq:
        key = dq.popleft()
        dk = dist[key]
        if key in targets:
            # 0/1 BFS pops in nondecreasing distance order
            return (key, dk, prev)
        if dk >= cap_dist:
            continue
        if len(dist) > state_cap:
            raise CoverError("cap-exceeded",
                             "cycle search exceeds %d states" % state_cap)
        for key2, cost, d, w in geom.neighbors(key, maxlen):
            nd = dk + cost
            if nd > cap_dist:
                continue
            lower = base_dist[key2[1]] if key2[0] == "r" else 0
            if nd + lower > cap_dist:
                continue
            if key2 not in dist or nd < dist[key2]:
                dist[key2] = nd
                prev[key2] = (key, d, w)
                if cost == 0:
                    dq.appendleft(key2)
                else:
                    dq.append(key2)
    return None


def _marker_walk(geom, mc, state_from, state_to, maxlen):
    """Zero-length dart walk along a marker cycle between two states
    standing for the same ideal node."""
    if state_from == state_to:
        return []
    mb = geom.map
    prev = {state_from: None}
    dq = deque([state_from])
    while dq:
        v, w = dq.popleft()
        j = mc.pos[v]
        # forward along the cycle, or back across the previous edge
        for d in (mc.cycle[j], mb.alpha[mc.cycle[j - 1]]):
            w2 = mul(w, geom.labels.label(d))
            if len(w2) > maxlen:
                continue
            s2 = (mb.vertex_of[mb.alpha[d]], w2)
            if s2 in prev:
                continue
            prev[s2] = ((v, w), d)
            if s2 == state_to:
                out = []
                cur = s2
                while prev[cur] is not None:
                    p, dd = prev[cur]
                    out.append(dd)
                    cur = p
                out.reverse()
                return out
            dq.append(s2)
    raise CoverError("marker-walk", "no marker connection found")


def min_homotopic_cycle(m, label, cap=500000, labels=None):
    """Exact minimal length 2l of a cycle freely homotopic to the
    boundary's deck element, with a witness.

    For a boundary-vertex the blown-up marker cycle realizes the class
    at zero length.  Otherwise a minimal cycle can be cut at a letter
    surviving cyclic reduction, so 2l is the least cover distance from
    a lift (v, empty) to (v, r) over base vertices v and rotations r
    of the deck element's word; the boundary contour realizes the
    class, so its length caps an exhaustive distance-bounded search."""
    ref = m.boundaries[label]
    if ref.kind == "vertex":
        witness = []
        if ref.dart is not None:
            if labels is None:
                _, labels = build_arc_system(m)
            kind, f = labels.map.boundary_target(label)
            witness = list(labels.map.face_contours()[f])
        return CycleCertificate(label, 0, witness, [])
    if labels is None:
        _, labels = build_arc_system(m)
    geom = CoverGeometry(m, labels)
    two_L = m.boundary_length(label)
    g = geom.gen[label]
    mb = labels.map
    best = None
    bound = two_L
    for v in range(mb.num_vertices):
        src = geom.node_key(v, "")
        targets = {geom.node_key(v, rot): rot for rot in rotations(g)}
        if src in targets:
            best = (0, v, src, src, {}, targets)
            break
        base_dist = geodesy.distances(mb, [v])
        hit = _capped_search(geom, src, set(targets), bound, cap, base_dist)
        if hit is not None and (best is None or hit[1] < best[0]):
            best = (hit[1], v, src, hit[0], hit[2], targets)
            bound = hit[1]
    if best is None:
        # unreachable: the contour cut at a surviving letter is a
        # witness of length two_L; kept as a safety net
        kind, f = mb.boundary_target(label)
        contour = list(mb.face_contours()[f])
        return CycleCertificate(label, two_L, contour, [])
    two_l, v0, src, dst, prev, targets = best
    steps = []
    key = dst
    while key != src:
        pkey, d, w = prev[key]
        steps.append((d, w, key))
        key = pkey
    steps.reverse()
    lift = [src] + [s[2] for s in steps]
    # rebuild a contiguous walk, filling zero-length marker-cycle
    # segments where the path hopped through an ideal node
    walk_maxlen = 2 * bound + 16
    witness = []
    cur = (v0, "")
    for d, w, key2 in steps:
        state_from = (mb.vertex_of[d], w)
        if state_from != cur:
            mc = geom.marker_of[cur[0]]
            witness += _marker_walk(geom, mc, cur, state_from, walk_maxlen)
        witness.append(d)
        cur = (mb.vertex_of[mb.alpha[d]], mul(w, labels.label(d)))
    end = (v0, targets[dst])
    if cur != end:
        mc = geom.marker_of[cur[0]]
        witness += _marker_walk(geom, mc, cur, end, walk_maxlen)
    return CycleCertificate(label, two_l, witness, lift)


def is_tight(m, label, cap=500000, labels=None):
    ref = m.boundaries[label]
    if ref.kind == "vertex":
        return True
    cert = min_homotopic_cycle(m, label, cap=cap, labels=labels)
    return cert.two_l == m.boundary_length(label)


def brute_min_cycle(m, label, cap=None, labels=None):
    """Independent oracle: depth-first enumeration of non-backtracking
    closed walks on the blown-up map, classified by homotopy word.
    Zero-length darts may be used at most once per walk so the search
    terminates; the boundary contour realizes the class, so its length
    caps the search and is returned when nothing shorter exists."""
    if labels is None:
        _, labels = build_arc_system(m)
    mb = labels.map
    bound = m.boundary_length(label)
    if cap is None:
        cap = bound
    if cap < bound:
        raise CoverError("cap-too-small",
                         "cap %d below contour bound %d" % (cap, bound))
    target = generator_class(m, label)
    dist_to = [geodesy.distances(mb, [v]) for v in range(mb.num_vertices)]
    best = [cap]

    def dfs(v0, v, length, word, zero_used, prev):
        if v == v0 and prev is not None and conjugacy_class(word) == target:
            if length < best[0]:
                best[0] = length
        if length + dist_to[v0][v] >= best[0]:
            return
        back = None if prev is None else mb.alpha[prev]
        for d in mb.vertex_darts(v):
            if d == back:
                continue
            cost = mb.edge_length(d)
            if cost == 0:
                if d in zero_used:
                    continue
                zero_used.add(d)
            dfs(v0, mb.vertex_of[mb.alpha[d]], length + cost,
                word + labels.label(d), zero_used, d)
            if cost == 0:
                zero_used.discard(d)

    for v0 in range(mb.num_vertices):
        dfs(v0, v0, 0, "", set(), None)
    return best[0]


# -- Busemann fields ---------------------------------------------------

class BusemannField:
    """Integer field d-tilde of one boundary on a truncated cover.

    For a boundary-vertex this is the distance to the distinguished
    ideal vertex; for a tight boundary face it is the Busemann
    function of the lifted contour geodesic, anchored so the lift of
    the reference corner has value 0.  Values are exact on the
    certified node set."""

    def __init__(self, cover, label, two_a, period, values, certified,
                 ray):
        self.cover = cover
        self.label = label
        self.two_a = two_a
        self.period = period      # deck word translating the ray
        self.values = values      # node index -> int
        self.certified = certified
        self.ray = ray            # node indices of the ray/ideal target

    def value(self, i):
        if i not in self.certified:
            raise CoverError("inconclusive",
                             "field not certified at node %d" % i)
        return self.values[i]


def _canon_under(geom, P, key):
    """Canonical representative of a node key under left multiplication
    by powers of P; returns (canonical key, exponent n) with
    rep = P^n applied to the key's word."""
    if key[0] == "r":
        rep, n = left_canon(key[2], P)
        return ("r", key[1], rep), n
    lab, u = key[1], key[2]
    p = geom.marker[lab].p
    best, best_n = coset_canon(u, p), 0
    for step, sign in ((P, 1), (inv_word(P), -1)):
        cur, n = u, 0
        for _ in range(2 * len(u) + 2 * len(P) + 4):
            cur = mul(step, cur)
            n += sign
            cand = coset_canon(cur, p)
            if (len(cand), cand, abs(n), n) < \
                    (len(best), best, abs(best_n), best_n):
                best, best_n = cand, n
            if len(cur) > len(best) + 2 * len(P) + 2 * len(p) + 2:
                break
    return ("i", lab, best), best_n


def _quotient_values(cover, P, two_a, base, Wq, qcap=400000):
    """Field values on the cover truncation, computed exactly on the
    quotient by the period's deck action.

    base: list of (cover node key, value).  Edges of the quotient
    carry weight cost + two_a * shift; closed quotient paths of
    winding k have length at least two_a * |k| (the ray is geodesic),
    so there is no negative cycle and label-correcting search
    terminates."""
    geom = cover.geom
    canon_cache = {}

    def canon(key):
        out = canon_cache.get(key)
        if out is None:
            out = _canon_under(geom, P, key)
            canon_cache[key] = out
        return out

    # seed values F on quotient nodes
    dist = {}
    seeds = []
    for key, val in base:
        qk, n = canon(key)
        f = val - two_a * n
        if qk not in dist or f < dist[qk]:
            dist[qk] = f
        seeds.append(qk)
    for i in range(len(cover.nodes)):
        qk, n = canon(cover.nodes[i])
        if qk not in dist:
            dist.setdefault(qk, None)
        seeds.append(qk)

    # build quotient adjacency by breadth-first discovery
    radj = {}
    known = set()
    todo = deque(seeds)
    while todo:
        qk = todo.popleft()
        if qk in known:
            continue
        known.add(qk)
        if len(known) > qcap:
            raise CoverError("cap-exceeded",
                             "quotient graph exceeds %d nodes" % qcap)
        for key2, cost, d, w in geom.neighbors(qk, Wq):
            qk2, n2 = canon(key2)
            if len(_qword(qk2)) > Wq:
                continue
            radj.setdefault(qk2, []).append((qk, cost + two_a * n2))
            if qk2 not in known:
                todo.append(qk2)

    # label-correcting relaxation of F(q1) <= w + F(q2)
    queue = deque(q for q in known if dist.get(q) is not None)
    inq = set(queue)
    pops = 0
    limit = (len(known) + 1) * max(len(known), 1)
    while queue:
        q2 = queue.popleft()
        inq.discard(q2)
        pops += 1
        if pops > limit:
            raise CoverError("inconclusive",
                             "no stable field (period not geodesic?)")
        f2 = dist[q2]
        for q1, w in radj.get(q2, []):
            nf = f2 + w
            if dist.get(q1) is None or nf < dist[q1]:
                dist[q1] = nf
                if q1 not in inq:
                    queue.append(q1)
                    inq.add(q1)

    values = {}
    for i in range(len(cover.nodes)):
        qk, n = canon(cover.nodes[i])
        f = dist.get(qk)
        if f is not None:
            values[i] = f + two_a * n
    return values


def _qword(key):
    return key[2]


def _ray_states(cover, label):
    """Lifted contour ray of a boundary face: list of
    (cover key, value) with the reference corner at value 0, plus the
    period word of one full turn."""
    geom = cover.geom
    mb = geom.map
    ref = cover.base.boundaries[label]
    kind, f = mb.boundary_target(label)
    contour = list(mb.face_contours()[f])
    if any(mb.edge_length(d) == 0 for d in contour):
        raise CoverError("zero-length-contour",
                         "boundary contour has zero-length darts")
    anchor = ref.root if ref.root in contour else min(contour)
    j0 = contour.index(anchor)
    contour = contour[j0:] + contour[:j0]
    states = []
    w = ""
    for t, d in enumerate(contour):
        states.append(((mb.vertex_of[d], w), -t))
        w = mul(w, geom.labels.label(d))
    period = w
    return contour, states, period


def busemann_field(cover, label, qcap=400000):
    """The field d-tilde of one boundary on the cover truncation.

    Boundary-vertex: distance to the distinguished ideal vertex.
    Boundary face: Busemann function of the lifted contour, which
    requires the contour to be tight (else it is not a geodesic and
    the limit does not exist); computed on the quotient by the
    contour's deck period and certified by recomputation on a larger
    quotient radius, then audited (Lipschitz, parity, no local
    minimum, equivariance).  Any audit failure raises 'inconclusive'."""
    m = cover.base
    geom = cover.geom
    ref = m.boundaries[label]
    if ref.kind == "vertex":
        two_a = 0
        mc = geom.marker[label]
        period = mc.p
        base = [(geom.ideal_node_key(label), 0)]
        ray = [cover.index[geom.ideal_node_key(label)]]
    else:
        two_a = m.boundary_length(label)
        cert = min_homotopic_cycle(m, label, labels=cover.labels)
        if cert.two_l != two_a:
            raise CoverError("non-tight",
                             "boundary %r is not tight" % (label,))
        contour, states, period = _ray_states(cover, label)
        base = [(geom.node_key(v, w), val) for (v, w), val in states]
        ray = [cover.index[k] for k, v in base if k in cover.index]
    Wq = cover.W
    values = _quotient_values(cover, period, two_a, base, Wq, qcap)
    check = _quotient_values(cover, period, two_a, base, Wq + 2, qcap)
    certified = {i for i, v in values.items()
                 if check.get(i) == v}
    field = BusemannField(cover, label, two_a, period, values,
                          certified, ray)
    _audit_field(field)
    return field


def _audit_field(field):
    cover = field.cover
    vals = field.values
    cert = field.certified
    targets = set(field.ray)
    mb = cover.map
    for i in cert:
        vi = vals[i]
        key = cover.nodes[i]
        neighbors_certified = True
        has_descent = False
        for j, cost, d, w in cover.adj[i]:
            if j not in cert:
                neighbors_certified = False
                continue
            dv = vals[j] - vi
            if cost == 0 and dv != 0:
                raise CoverError("inconclusive",
                                 "field jumps along a zero-length edge")
            if cost == 1 and dv not in (-1, 1):
                raise CoverError("inconclusive",
                                 "field violates unit-step parity")
            if dv < 0:
                has_descent = True
        # the no-local-minimum test needs the node's full adjacency:
        # regular nodes with all base darts lifted inside the
        # truncation (ideal nodes have unbounded spiral adjacency)
        complete = (key[0] == "r" and
                    len(cover.adj[i]) == len(mb.vertex_darts(key[1])))
        if (complete and neighbors_certified and not has_descent
                and i not in targets and cover.adj[i]):
            raise CoverError("inconclusive",
                             "field has a local minimum off the boundary")
    if field.period:
        for i in cert:
            j = cover.deck(field.period, i)
            if j is not None and j in cert:
                if vals[j] != vals[i] - field.two_a:
                    raise CoverError("inconclusive",
                                     "field violates deck equivariance")


# -- pair distances and latitude sets ----------------------------------

def pair_distance_and_latitudes(cover, label_i, label_j,
                                field_i=None, field_j=None):
    """Distance between two boundaries on the cover and the latitude
    sets of geodesic vertices, ordered left to right.

    d_ij = min over nodes of (d_i + d_j); I(r) = nodes attaining the
    minimum with d_i = r.  Only latitudes whose sets lie inside the
    certified region are returned."""
    if field_i is None:
        field_i = busemann_field(cover, label_i)
    if field_j is None:
        field_j = busemann_field(cover, label_j)
    common = field_i.certified & field_j.certified
    core = {cover.node(v, "") for v in range(cover.map.num_vertices)}
    if not core <= common:
        raise CoverError("inconclusive",
                         "fundamental domain not certified")
    dij = min(field_i.values[i] + field_j.values[i] for i in common)
    by_lat = {}
    for i in common:
        if field_i.values[i] + field_j.values[i] == dij:
            by_lat.setdefault(field_i.values[i], []).append(i)
    out = {}
    for r, nodes in by_lat.items():
        out[r] = order_latitude(cover, field_i, field_j, nodes)
    return dij, out


def _rotation_at(cover, i):
    """Clockwise dart order at a regular node's base vertex: map from
    dart to its clockwise successor."""
    mb = cover.map
    key = cover.nodes[i]
    v = key[1]
    return {mb.sigma[d]: d for d in mb.vertex_darts(v)}


def _descend(cover, field, start, targets):
    """Leftmost strictly descending unit-step path from start to the
    target set: list of (dart, from_node, to_node); deterministic
    once launched (clockwise scan from the arrival dart)."""
    mb = cover.map
    steps = []
    cur = start
    arrive = None
    seen = 0
    while cur not in targets:
        seen += 1
        if seen > 4 * (len(cover.nodes) + 1):
            raise CoverError("inconclusive", "descent does not terminate")
        cand = {}
        for j, cost, d, w in cover.adj[cur]:
            if cost != 1:
                continue
            if j not in field.certified or cur not in field.certified:
                continue
            if field.values[j] == field.values[cur] - 1:
                cand[d] = j
        if not cand:
            raise CoverError("inconclusive",
                             "descent left the certified region")
        if cover.nodes[cur][0] == "i":
            # spiral order is linear; take the smallest spiral
            # coordinate for determinism
            d = min(cand)
        elif arrive is None:
            d = min(cand)
        else:
            cw = _rotation_at(cover, cur)
            d = cw[arrive]
            while d not in cand:
                d = cw[d]
        j = cand[d]
        steps.append((d, cur, j))
        arrive = mb.alpha[d]
        # the arrival dart lives at the new node's base vertex
        cur = j
    return steps


def order_latitude(cover, field_i, field_j, nodes):
    """Order the nodes of one latitude set from left to right.

    Each node's leftmost descent toward boundary i is traced; two
    descents either eventually share a directed edge (compare the two
    arrival darts against the common outgoing dart in the vertex
    rotation) or arrive separately on the target ray (compare arrival
    positions along it)."""
    if len(nodes) <= 1:
        return list(nodes)
    targets = set(field_i.ray)
    paths = {i: _descend(cover, field_i, i, targets) for i in nodes}

    import functools

    def compare(u, v):
        if u == v:
            return 0
        pu, pv = paths[u], paths[v]
        eu = {(d, a) for d, a, b in pu}
        shared = None
        for idx, (d, a, b) in enumerate(pv):
            if (d, a) in eu:
                shared = (d, a)
                iv = idx
                break
        if shared is not None:
            iu = [k for k, (d, a, b) in enumerate(pu)
                  if (d, a) == shared][0]
            if iu == 0 or iv == 0:
                # one node lies on the other's path: deeper start is
                # arbitrary but deterministic
                return -1 if iu == 0 else 1
            z = shared[1]
            o = shared[0]
            au = cover.map.alpha[pu[iu - 1][0]]
            av = cover.map.alpha[pv[iv - 1][0]]
            sig = cover.map.sigma
            d = sig[o]
            while True:
                if d == au:
                    return -1
                if d == av:
                    return 1
                d = sig[d]
        # disjoint arrivals: compare positions on the ray
        tu = field_i.ray.index(pu[-1][2]) if pu else \
            field_i.ray.index(u)
        tv = field_i.ray.index(pv[-1][2]) if pv else \
            field_i.ray.index(v)
        if tu != tv:
            return -1 if tu < tv else 1
        return -1 if u < v else 1

    return sorted(nodes, key=functools.cmp_to_key(compare))

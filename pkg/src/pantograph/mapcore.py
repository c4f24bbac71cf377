"""Dart-based combinatorial maps on the sphere with labeled boundaries.

A map is encoded by two permutations of its darts (half-edges): the
edge involution alpha and the counterclockwise vertex rotation sigma.
Faces are the orbits of phi = sigma o alpha; this single convention
fixes every left/right and clockwise/counterclockwise notion used
downstream.  Boundaries are marked faces or marked vertices; a marked
vertex stands for a puncture and has length zero.
"""

import json


class BoundaryRef:
    """A marked face or vertex, referenced by any incident dart.

    ``dart`` is None only for the vertex-map (no darts at all).
    ``root`` optionally marks a corner (a dart) for rooted boundaries.
    """

    __slots__ = ("kind", "dart", "root")

    def __init__(self, kind, dart, root=None):
        if kind not in ("face", "vertex"):
            raise ValueError("kind must be 'face' or 'vertex'")
        self.kind = kind
        self.dart = dart
        self.root = root

    def __repr__(self):
        return "BoundaryRef(%r, %r, root=%r)" % (self.kind, self.dart,
                                                 self.root)

    def __eq__(self, other):
        return (isinstance(other, BoundaryRef) and self.kind == other.kind
                and self.dart == other.dart and self.root == other.root)


def _orbits(perm):
    """Orbits of a permutation given as a list, ordered by least element."""
    n = len(perm)
    seen = [False] * n
    out = []
    for start in range(n):
        if seen[start]:
            continue
        orbit = []
        d = start
        while not seen[d]:
            seen[d] = True
            orbit.append(d)
            d = perm[d]
        out.append(orbit)
    return out


class PlanarMap:
    """An immutable rotation system with labeled boundaries.

    The vertex-map (a single vertex, no darts) is represented with
    dart_count == 0 and a single boundary of kind 'vertex'.
    """

    def __init__(self, alpha, sigma, boundaries, zero_length=()):
        self.alpha = tuple(alpha)
        self.sigma = tuple(sigma)
        self.n = len(self.alpha)
        self.boundaries = dict(boundaries)
        self.zero_length = frozenset(zero_length)
        self._derive()

    def _derive(self):
        n = self.n
        self.malformed = (sorted(self.alpha) != list(range(n))
                          or sorted(self.sigma) != list(range(n)))
        if self.malformed:
            # validate() will report; keep enough structure to not crash
            self.phi = ()
            self._vertex_orbits = []
            self._face_orbits = []
            self.vertex_of = []
            self.face_of = []
            return
        self.phi = tuple(self.sigma[self.alpha[d]] for d in range(n)) \
            if n else ()
        self._vertex_orbits = _orbits(list(self.sigma))
        self._face_orbits = _orbits(list(self.phi))
        self.vertex_of = [0] * n
        for i, orb in enumerate(self._vertex_orbits):
            for d in orb:
                self.vertex_of[d] = i
        self.face_of = [0] * n
        for i, orb in enumerate(self._face_orbits):
            for d in orb:
                self.face_of[d] = i

    # -- basic counts --------------------------------------------------

    @property
    def num_vertices(self):
        return len(self._vertex_orbits) if self.n else 1

    @property
    def num_edges(self):
        return self.n // 2

    @property
    def num_faces(self):
        return len(self._face_orbits) if self.n else 1

    def vertex_orbits(self):
        return [list(o) for o in self._vertex_orbits]

    def face_contours(self):
        """Per face, the cyclic dart sequence of its contour."""
        return [list(o) for o in self._face_orbits]

    def face_degree(self, face_id):
        """Number of non-zero-length darts on the face contour."""
        return sum(1 for d in self._face_orbits[face_id]
                   if d not in self.zero_length)

    def vertex_darts(self, vertex_id):
        return list(self._vertex_orbits[vertex_id])

    def boundary_target(self, label):
        """(kind, orbit id) of a boundary; orbit id None for the
        vertex-map."""
        ref = self.boundaries[label]
        if ref.dart is None:
            return ref.kind, None
        if ref.kind == "face":
            return "face", self.face_of[ref.dart]
        return "vertex", self.vertex_of[ref.dart]

    def boundary_length(self, label):
        ref = self.boundaries[label]
        if ref.kind == "vertex" or ref.dart is None:
            return 0
        return self.face_degree(self.face_of[ref.dart])

    def boundary_faces(self):
        """Set of face ids referenced by boundaries of kind 'face'."""
        out = set()
        for label, ref in self.boundaries.items():
            if ref.kind == "face" and ref.dart is not None:
                out.add(self.face_of[ref.dart])
        return out

    def inner_faces(self):
        bnd = self.boundary_faces()
        return [i for i in range(len(self._face_orbits)) if i not in bnd]

    def edge_length(self, dart):
        return 0 if dart in self.zero_length else 1

    # -- validation ----------------------------------------------------

    def validate(self):
        """Return a list of diagnostics; empty means valid."""
        diags = []
        n = self.n
        darts = range(n)
        if sorted(self.alpha) != list(darts):
            diags.append("alpha is not a permutation of the darts")
            return diags
        if sorted(self.sigma) != list(darts):
            diags.append("sigma is not a permutation of the darts")
            return diags
        for d in darts:
            if self.alpha[d] == d:
                diags.append("alpha not fixed-point-free: dart %d" % d)
                break
            if self.alpha[self.alpha[d]] != d:
                diags.append("alpha not an involution: dart %d" % d)
                break
        for d in self.zero_length:
            if not (0 <= d < n):
                diags.append("zero_length references unknown dart %r" % d)
            elif self.alpha[d] not in self.zero_length:
                diags.append("zero_length not closed under alpha: dart %d" % d)
        if n and not self._connected():
            diags.append("map is not connected")
        if n and not diags:
            v, e, f = self.num_vertices, self.num_edges, self.num_faces
            if v - e + f != 2:
                diags.append("not genus 0: V-E+F = %d" % (v - e + f))
        if n == 0 and len(self.boundaries) != 1:
            diags.append("the vertex-map needs exactly one boundary")
        targets = set()
        for label, ref in sorted(self.boundaries.items()):
            if ref.dart is None:
                if n:
                    diags.append("boundary %s has no dart on a nonempty map"
                                 % label)
                if ref.kind != "vertex":
                    diags.append("dartless boundary %s must be a vertex"
                                 % label)
                targets.add((label, "vertex", None))
                continue
            if not (0 <= ref.dart < n):
                diags.append("boundary %s references unknown dart" % label)
                continue
            tgt = self.boundary_target(label)
            if tgt in {t[1:] for t in targets}:
                diags.append("boundary %s duplicates another boundary's "
                             "target" % label)
            targets.add((label,) + tgt)
            if ref.root is not None:
                if not (0 <= ref.root < n):
                    diags.append("boundary %s has an unknown root" % label)
                elif ref.kind == "face" \
                        and self.face_of[ref.root] != self.face_of[ref.dart]:
                    diags.append("boundary %s root not on its face" % label)
        if not diags:
            bnd = self.boundary_faces()
            for i in range(len(self._face_orbits)):
                if i not in bnd and self.face_degree(i) % 2:
                    diags.append("inner face %d has odd degree: not "
                                 "essentially bipartite" % i)
        return diags

    def _connected(self):
        seen = {0}
        stack = [0]
        while stack:
            d = stack.pop()
            for e in (self.alpha[d], self.sigma[d]):
                if e not in seen:
                    seen.add(e)
                    stack.append(e)
        return len(seen) == self.n

    # -- canonical form ------------------------------------------------

    def canonical_code(self):
        """A byte string equal for two maps iff they are related by an
        orientation-preserving isomorphism respecting boundary labels,
        kinds, roots and zero-length flags."""
        n = self.n
        best = None
        starts = range(n) if n else [None]
        for start in starts:
            code = self._code_from(start)
            if best is None or code < best:
                best = code
        return best

    def _code_from(self, start):
        n = self.n
        lab = {}
        order = []
        if start is not None:
            lab[start] = 0
            order.append(start)
            i = 0
            while i < len(order):
                d = order[i]
                i += 1
                for e in (self.sigma[d], self.alpha[d]):
                    if e not in lab:
                        lab[e] = len(order)
                        order.append(e)
        body = []
        for d in order:
            body.append((lab[self.sigma[d]], lab[self.alpha[d]],
                         1 if d in self.zero_length else 0))
        bnd = []
        for label in sorted(self.boundaries):
            ref = self.boundaries[label]
            if ref.dart is None:
                bnd.append((str(label), ref.kind, -1, -1))
                continue
            if ref.kind == "face":
                orbit = self._face_orbits[self.face_of[ref.dart]]
            else:
                orbit = self._vertex_orbits[self.vertex_of[ref.dart]]
            tgt = min(lab[d] for d in orbit)
            root = lab[ref.root] if ref.root is not None else -1
            bnd.append((str(label), ref.kind, tgt, root))
        return json.dumps([n, body, bnd]).encode()

    def relabeled(self, perm):
        """The same map with dart d renamed perm[d]."""
        n = self.n
        inv = [0] * n
        for d in range(n):
            inv[perm[d]] = d
        alpha = [perm[self.alpha[inv[d]]] for d in range(n)]
        sigma = [perm[self.sigma[inv[d]]] for d in range(n)]
        bnd = {}
        for label, ref in self.boundaries.items():
            bnd[label] = BoundaryRef(
                ref.kind,
                perm[ref.dart] if ref.dart is not None else None,
                perm[ref.root] if ref.root is not None else None)
        return PlanarMap(alpha, sigma, bnd,
                         [perm[d] for d in self.zero_length])

    # -- boundary-vertex blowup ---------------------------------------

    def blowup_boundary_vertices(self):
        """Replace every boundary-vertex by a cycle of zero-length
        marker edges carrying the incident half-edges; the boundary then
        references the puncture face (still of length zero)."""
        vertex_labels = [label for label, ref in self.boundaries.items()
                         if ref.kind == "vertex"]
        if not vertex_labels:
            return self
        alpha = list(self.alpha)
        sigma = list(self.sigma)
        zero = set(self.zero_length)
        bnd = {label: BoundaryRef(ref.kind, ref.dart, ref.root)
               for label, ref in self.boundaries.items()}
        for label in vertex_labels:
            ref = bnd[label]
            if ref.dart is None:
                # vertex-map: a single zero-length loop around the puncture
                alpha = [1, 0]
                sigma = [1, 0]
                zero = {0, 1}
                bnd[label] = BoundaryRef("face", 0)
                continue
            incident = []
            d = ref.dart
            while True:
                incident.append(d)
                d = sigma[d]
                if d == ref.dart:
                    break
            k = len(incident)
            base = len(alpha)
            # darts base+2i = p_i (forward marker), base+2i+1 = q_i (back)
            alpha.extend([0] * 2 * k)
            sigma.extend([0] * 2 * k)
            for i in range(k):
                p = base + 2 * i
                q = base + 2 * i + 1
                alpha[p] = base + 2 * ((i + 1) % k) + 1
                alpha[base + 2 * ((i + 1) % k) + 1] = p
                sigma[incident[i]] = p
                sigma[p] = q
                sigma[q] = incident[i]
                zero.add(p)
                zero.add(q)
            bnd[label] = BoundaryRef("face", base + 1)
        return PlanarMap(alpha, sigma, bnd, zero)

    def contract_marker_cycles(self):
        """Inverse of blowup_boundary_vertices: contract each boundary
        face made only of zero-length marker darts back to a vertex."""
        marker = set()
        bnd = {label: BoundaryRef(ref.kind, ref.dart, ref.root)
               for label, ref in self.boundaries.items()}
        anchors = {}
        for label, ref in self.boundaries.items():
            if ref.kind != "face" or ref.dart is None:
                continue
            contour = self._face_orbits[self.face_of[ref.dart]]
            if any(d not in self.zero_length for d in contour):
                continue
            cycle = set()
            for q in contour:
                cycle.add(q)
                cycle.add(self.alpha[q])
            marker |= cycle
            # the carried half-edge at each blowup vertex, if any
            carried = [self.sigma[q] for q in contour
                       if self.sigma[q] not in cycle]
            anchors[label] = carried
        if not marker:
            return self
        keep = [d for d in range(self.n) if d not in marker]
        if not keep:
            label = next(iter(anchors))
            return PlanarMap([], [], {label: BoundaryRef("vertex", None)})
        newid = {d: i for i, d in enumerate(keep)}
        alpha = [newid[self.alpha[d]] for d in keep]
        sigma = [0] * len(keep)
        for d in keep:
            nxt = self.sigma[d]
            while nxt in marker:
                # hop along the marker cycle to the next carried dart
                nxt = self.sigma[self.alpha[nxt]]
            sigma[newid[d]] = newid[nxt]
        for label, carried in anchors.items():
            bnd[label] = BoundaryRef("vertex",
                                     newid[carried[0]] if carried else None)
        zero = [newid[d] for d in self.zero_length if d not in marker]
        return PlanarMap(alpha, sigma, bnd, zero)

    # -- JSON interchange ---------------------------------------------

    def to_json(self):
        bnd = {}
        for label, ref in self.boundaries.items():
            entry = {"kind": ref.kind, "dart": ref.dart}
            if ref.root is not None:
                entry["root"] = ref.root
            bnd[str(label)] = entry
        return {"darts": self.n,
                "alpha": list(self.alpha),
                "sigma": list(self.sigma),
                "zero_length": sorted(self.zero_length),
                "boundaries": bnd}

    @classmethod
    def from_json(cls, obj):
        bnd = {}
        for label, entry in obj["boundaries"].items():
            bnd[label] = BoundaryRef(entry["kind"], entry["dart"],
                                     entry.get("root"))
        m = cls(obj["alpha"], obj["sigma"], bnd, obj.get("zero_length", ()))
        if m.n != obj["darts"]:
            raise ValueError("dart count disagrees with alpha length")
        return m

    def dumps(self):
        return json.dumps(self.to_json())

    @classmethod
    def loads(cls, text):
        return cls.from_json(json.loads(text))

    def __repr__(self):
        return ("PlanarMap(n=%d, V=%d, F=%d, boundaries=%s)"
                % (self.n, self.num_vertices, self.num_faces,
                   sorted(self.boundaries)))


def vertex_map(label="A"):
    """The map reduced to a single vertex, marked as a boundary."""
    return PlanarMap([], [], {label: BoundaryRef("vertex", None)})


def isomorphic(m1, m2):
    """Exhaustive label-respecting orientation-preserving isomorphism
    test, independent of canonical_code (oracle for tests)."""
    if m1.n != m2.n or sorted(m1.boundaries) != sorted(m2.boundaries):
        return False
    if m1.n == 0:
        return all(m1.boundaries[k].kind == m2.boundaries[k].kind
                   for k in m1.boundaries)
    for image in range(m2.n):
        # an isomorphism is determined by the image of dart 0
        mapping = {0: image}
        stack = [0]
        ok = True
        while stack and ok:
            d = stack.pop()
            for f, g in ((m1.sigma[d], m2.sigma[mapping[d]]),
                         (m1.alpha[d], m2.alpha[mapping[d]])):
                if f in mapping:
                    if mapping[f] != g:
                        ok = False
                        break
                else:
                    mapping[f] = g
                    stack.append(f)
        if not ok or len(mapping) != m1.n:
            continue
        if len(set(mapping.values())) != m1.n:
            continue
        if any((d in m1.zero_length) != (mapping[d] in m2.zero_length)
               for d in range(m1.n)):
            continue
        def ref_ok(r1, r2):
            if r1.kind != r2.kind:
                return False
            if r1.kind == "face":
                same = m2.face_of[mapping[r1.dart]] == m2.face_of[r2.dart]
            else:
                same = m2.vertex_of[mapping[r1.dart]] == m2.vertex_of[r2.dart]
            if not same:
                return False
            if (r1.root is None) != (r2.root is None):
                return False
            if r1.root is not None and mapping[r1.root] != r2.root:
                return False
            return True
        if all(ref_ok(m1.boundaries[k], m2.boundaries[k])
               for k in m1.boundaries):
            return True
    return False

"""Scratch driver: try the transversal-order calibration combos on the
small examples and report which pass round trips."""
import itertools
import sys
import traceback

from pantograph.mapcore import PlanarMap, BoundaryRef
from pantograph import census, decomposition, assembly, geodesy


def star_map():
    return PlanarMap([1, 0, 3, 2, 5, 4], [2, 1, 4, 3, 0, 5],
                     {"A": BoundaryRef("vertex", 1),
                      "B": BoundaryRef("vertex", 3),
                      "C": BoundaryRef("vertex", 5)})


def two_edge_path():
    return PlanarMap([1, 0, 3, 2], [0, 2, 1, 3],
                     {"A": BoundaryRef("vertex", 0),
                      "B": BoundaryRef("vertex", 3),
                      "C": BoundaryRef("vertex", 1)})


def theta_map():
    return census.enumerate_bounded_maps({"A": 2, "B": 2, "C": 2}, 0)[0]


def try_one(name, m, proc="I"):
    q = decomposition.disassemble(m, proc)
    m2 = decomposition.reassemble(q)
    ok = m2.canonical_code() == m.canonical_code()
    shapes = [(p.kind,
               "pt" if p.is_vertex_piece() else p.map.n)
              for p in q.pieces()]
    return ok, shapes


def main():
    cases = [("path", two_edge_path(), "I"),
             ("star", star_map(), "I"),
             ("theta", theta_map(), "I")]
    for sel, wind in itertools.product((True, False), (1, -1)):
        decomposition._SEL_MAX = sel
        decomposition._WIND = wind
        print("== SEL_MAX=%s WIND=%+d" % (sel, wind))
        for name, m, proc in cases:
            try:
                ok, shapes = try_one(name, m, proc)
                print("  %-6s ok=%s shapes=%s" % (name, ok, shapes))
            except Exception as exc:
                print("  %-6s FAIL %s: %s" % (name, type(exc).__name__, exc))
                if "-v" in sys.argv:
                    traceback.print_exc()


if __name__ == "__main__":
    main()

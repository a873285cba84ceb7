"""ICIS germs shared by the invariant, lattice and acceptance tests.

Each entry is (name, variables, generators, mu).  Every germ here is
quasi-homogeneous, so tau = mu serves as a consistency oracle.  The two
"random" entries are pairs of quadrics with small integer coefficients,
frozen as literals.
"""
from icis.invariants import GermSpec
from icis.parser import parse_poly

_RAW = [
    ("A1 curve", "x, y", ["x^2 + y^2"], 1),
    ("A3 curve", "x, y", ["x^4 + y^2"], 3),
    ("A2 surface", "x, y, z", ["x^3 + y^2 + z^2"], 2),
    ("A4 surface", "x, y, z", ["x^5 + y^2 + z^2"], 4),
    ("example 1", "x, y, z", ["z^2 - x*y", "x^2 + y^2 + z^2"], 5),
    ("example 2", "x, y, z", ["x*y + z^3", "x^2 + y*z"], 7),
    ("space curve (xy+z^2, xz+y^3)", "x, y, z", ["x*y + z^2", "x*z + y^3"], 7),
    ("random quadrics C3", "x, y, z",
     ["-3*x*y + 5*y^2 + x*z - 5*y*z - 4*z^2", "3*x^2 - 4*x*y + 4*y^2 - 5*y*z + 3*z^2"], 5),
    ("random quadrics C4", "x, y, z, w",
     ["-2*x^2 - 5*x*y + y^2 - 4*x*z - 4*y*z - 4*z^2 + x*w - 2*y*w + 3*z*w + w^2",
      "-5*x^2 + 4*x*y + 5*y^2 - 4*x*z + 5*y*z - 5*z^2 - 2*x*w + 4*y*w + 4*z*w + 4*w^2"], 7),
]


def germ(gens: str, polys):
    names = tuple(v.strip() for v in gens.split(","))
    return GermSpec(tuple(parse_poly(p, names) for p in polys))


CATALOG = [(name, germ(v, ps), mu) for name, v, ps, mu in _RAW]
SMALL = [c for c in CATALOG if c[0] != "random quadrics C4"]

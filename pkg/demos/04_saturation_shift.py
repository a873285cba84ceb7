"""Saturation on a germ that is not quasi-homogeneous: x^4 + y^5 + x^2 y^3."""
from icis import SmoothingSpec, compute, parse_poly, tjurina, GermSpec

xy = ("x", "y")
qh = parse_poly("x^4 + y^5", xy)
sq = parse_poly("x^4 + y^5 + x^2*y^3", xy)

for name, f in (("x^4 + y^5", qh), ("x^4 + y^5 + x^2*y^3", sq)):
    res = compute(SmoothingSpec((), f))
    print(f"{name}: mu = {res.lattice.mu}, tau = {tjurina(GermSpec((f,)))}, "
          f"steps = {res.saturated.steps}")
    print("   roots of b-hat:", sorted(str(-r) for r in res.bhat.roots))

a = {-r for r in compute(SmoothingSpec((), qh)).bhat.roots}
b = {-r for r in compute(SmoothingSpec((), sq)).bhat.roots}
print("only in the quasi-homogeneous one:", [str(x) for x in a - b])
print("only after the perturbation:     ", [str(x) for x in b - a])

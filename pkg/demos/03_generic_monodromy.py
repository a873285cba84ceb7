"""Generic monodromy of the ICIS V(xy + z^3, x^2 + yz)."""
import random

from icis import GermSpec, SmoothingSpec, compute, line_smoothing, mu_minimal, parse_poly
from icis.deformations import random_alpha

xyz = ("x", "y", "z")
f1, f2 = parse_poly("x*y + z^3", xyz), parse_poly("x^2 + y*z", xyz)
g = GermSpec((f1, f2))

r = mu_minimal(g, trials=5, seed=0)
print("mu-minimal smoothing: mu(X) =", r.mu_X, " mu(Z) =", r.mu_Z, " nu =", r.nu)
res = compute(r.smoothing, germ=g)
print("b-hat(s) =", res.bhat.factored())
print("saturation steps:", res.saturated.steps)
fr = res.spectrum.fractions
print("eigenvalues exp(2 pi i k) for k in", [str(q) for q in fr])
print("cyclotomic levels:", res.spectrum.levels())

# the spectrum does not depend on the chosen line
rng = random.Random(1)
for _ in range(3):
    a = random_alpha(2, rng)
    other = compute(line_smoothing(g, a), germ=g).spectrum.fractions
    print("  alpha =", [str(x) for x in a], "same spectrum:", other == fr)

# a general combination of the generators is an A1 surface singularity
h = f1 * 2 + f2 * 3
single = compute(SmoothingSpec((), h), germ=GermSpec((h,)))
print("general element b-hat:", single.bhat.factored(),
      " b candidates:", [c.factored() for c in single.bhat.candidates()])

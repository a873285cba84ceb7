"""The Brieskorn lattice of the cusp x^2 + y^3, step by step."""
from icis import GLClass, SmoothingSpec, compute, dt_inverse, parse_poly, t_action

xy = ("x", "y")
f = parse_poly("x^2 + y^3", xy)
res = compute(SmoothingSpec((), f), exact=True)
L = res.lattice

print("rank over C{t}:", L.mu)
print("basis:", [str(b) for b in L.basis])
print("jet orders N, M =", L.N, L.M, "with weights", res.weights)

one = GLClass(parse_poly("1", xy), L.N)
# t acts by multiplication with f; in the basis this is t * e_0
print("coordinates of t*[1]:", [[str(c) for c in row] for row in L.coordinates(t_action(L, one))])

# d/dt^{-1} integrates: coordinates are series in t
inv = dt_inverse(L, one)
print("coordinates of dt^-1 [1]:", [[str(c) for c in row] for row in L.coordinates(inv)])
print("round trip dt(dt^-1 [1]) == [1]:", L.equal_mod(L.dt(inv), one, L.precision))

# quasi-homogeneous: saturation adds nothing
print("saturation steps:", res.saturated.steps)
print("residue of -dt t:", [[str(c) for c in row] for row in res.saturated.residue])
print("b-hat(s) =", res.bhat.factored())
small, big = res.bhat.candidates()
print("candidates for b(s):", small.factored(), "or", big.factored())
print("eigenvalue fractions:", [str(q) for q in res.spectrum.fractions])

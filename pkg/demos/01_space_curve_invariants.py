"""Invariants of the space curve V(z^2 - xy, x^2 + y^2 + z^2) in C^3."""
from icis import (GermSpec, le_greuel_check, line_smoothing, milnor, mu_minimal, parse_poly,
                  semiuniversal, t1_basis, tjurina)
from icis.invariants import critical_ring_length

xyz = ("x", "y", "z")
g = GermSpec((parse_poly("z^2 - x*y", xyz), parse_poly("x^2 + y^2 + z^2", xyz)))

# Milnor number via a random Le-Greuel flag, Tjurina number via T^1
print("mu  =", milnor(g))
print("tau =", tjurina(g))

# a monomial basis of T^1, one slot per generator
for vec in t1_basis(g):
    print("  T1 direction:", [str(p) for p in vec])

fam = semiuniversal(g)
print("semiuniversal family over", fam.tau, "parameters:")
for G in fam.generators:
    print("  ", G)

# restrict to a line t -> alpha*t in the base: f_i - alpha_i t = 0, fiber function t
s = line_smoothing(g, (2, 3))
print("line smoothing total space:", [str(f) for f in s.total])
mu_x, mu_z, nu, ok = le_greuel_check(s)
print(f"mu(X) + mu(Z) = {mu_x} + {mu_z} = {nu} = nu(D, 0)? {ok}")
print("critical ring length:", critical_ring_length(s))

# the minimum over several random lines is a mu-minimal smoothing
best = mu_minimal(g, trials=5, seed=0)
print("mu-minimal line alpha =", [str(a) for a in best.alpha], "mu(X) =", best.mu_X)

"""Milnor, Tjurina and discriminant invariants of ICIS germs.

Milnor numbers use the Le-Greuel recursion along a generic flag
``(g1) c (g1, g2) c ...`` of complete intersections, where ``g`` is a random
invertible rational mix of the given generators.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .localalg import INFINITE, Ideal, krull_dim, std_basis, std_basis_module, vdim
from .polyforms import Poly, jacobian, minors

COEFF_BOUND = 10


class NotICISError(ValueError):
    """The input does not define an isolated complete intersection singularity."""

    code = "NOT-ICIS"


class DegenerateFlagError(RuntimeError):
    """Every random flag tried was non-generic."""

    code = "DEGENERATE-FLAG"


@dataclass(frozen=True)
class GermSpec:
    """A germ (Z, 0) = V(f_1, ..., f_k) in C^d."""

    generators: Tuple[Poly, ...]

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if not gens:
            raise ValueError("a germ needs at least one generator")
        names = gens[0].gens
        if any(g.gens != names for g in gens):
            raise ValueError("generators over different variable sets")
        if any(g.constant_term() != 0 for g in gens):
            raise ValueError("generators must vanish at the origin")
        if len(gens) > len(names):
            raise ValueError("more generators than variables")

    @property
    def gens(self) -> Tuple[str, ...]:
        return self.generators[0].gens

    @property
    def ambient_dim(self) -> int:
        return len(self.gens)

    @property
    def k(self) -> int:
        return len(self.generators)

    @property
    def dim(self) -> int:
        return self.ambient_dim - self.k


@dataclass(frozen=True)
class SmoothingSpec:
    """A function F on X = V(F_1..F_r) in C^d, restricting to the smoothing f = F|X."""

    total: Tuple[Poly, ...]
    function: Poly
    alpha: Optional[Tuple[mpq, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "total", tuple(self.total))
        if self.alpha is not None:
            object.__setattr__(self, "alpha", tuple(mpq(a) for a in self.alpha))
        names = self.function.gens
        if any(g.gens != names for g in self.total):
            raise ValueError("generators over different variable sets")
        if self.function.constant_term() != 0 or any(g.constant_term() for g in self.total):
            raise ValueError("F and F_1..F_r must vanish at the origin")

    @property
    def gens(self) -> Tuple[str, ...]:
        return self.function.gens

    @property
    def ambient_dim(self) -> int:
        return len(self.gens)

    @property
    def r(self) -> int:
        return len(self.total)

    @property
    def fiber_dim(self) -> int:
        return self.ambient_dim - self.r - 1

    def fiber(self) -> GermSpec:
        return GermSpec(self.total + (self.function,))

    def total_space(self) -> Optional[GermSpec]:
        """The germ (X, 0); None when X is the whole ambient space."""
        return GermSpec(self.total) if self.total else None

    def critical_ideal(self) -> List[Poly]:
        return list(self.total) + minors(jacobian(list(self.total) + [self.function]),
                                         self.r + 1)

    def reduced(self) -> "SmoothingSpec":
        """Equivalent smoothing with every generator of the form c*v + g(others) eliminated."""
        total = list(self.total)
        func = self.function
        changed = True
        while changed:
            changed = False
            for i, g in enumerate(total):
                hit = _solvable_variable(g)
                if hit is None:
                    continue
                v, c = hit
                lin = Poly.monomial(g.gens, [1 if j == v else 0 for j in range(len(g.gens))], c)
                value = (g - lin) * (-1 / c)
                rest = [h.subs(v, value).drop_var(v) for j, h in enumerate(total) if j != i]
                func = func.subs(v, value).drop_var(v)
                total = rest
                changed = True
                break
        return SmoothingSpec(tuple(total), func, self.alpha)

    def validate(self) -> None:
        """Raise NotICISError unless F|X defines a smoothing of an ICIS."""
        if self.total:
            b = std_basis(Ideal.of(self.total, self.ambient_dim))
            if krull_dim(b) != self.ambient_dim - self.r:
                raise NotICISError("X = V(F_1..F_r) is not a complete intersection at 0")
            x_ok, _ = is_icis(GermSpec(self.total))
            if not x_ok:
                raise NotICISError("total space X has a non-isolated singularity")
        crit = std_basis(Ideal.of(self.critical_ideal(), self.ambient_dim))
        if vdim(crit) is INFINITE:
            raise NotICISError("critical locus of F on X is not isolated")


def _solvable_variable(g: Poly):
    # a variable v with g = c*v + (terms free of v), c a nonzero constant
    d = len(g.gens)
    for v in range(d):
        unit = tuple(1 if j == v else 0 for j in range(d))
        c = g.terms.get(unit)
        if not c:
            continue
        if all(e[v] == 0 for e in g.terms if e != unit):
            return v, c
    return None


@dataclass
class InvariantReport:
    mu: int
    tau: int
    nu: Optional[int] = None
    mu_total: Optional[int] = None
    flags: Dict[str, object] = field(default_factory=dict)

    def le_greuel_holds(self) -> Optional[bool]:
        if self.nu is None or self.mu_total is None:
            return None
        return self.mu_total + self.mu == self.nu


def _vdim_of(polys: Sequence[Poly], nvars: int):
    return vdim(std_basis(Ideal.of(list(polys), nvars)))


def is_icis(g: GermSpec) -> Tuple[bool, Dict[str, object]]:
    """Complete intersection of the expected dimension with at most an isolated singularity."""
    d, k = g.ambient_dim, g.k
    diag: Dict[str, object] = {}
    b = std_basis(Ideal.of(g.generators, d))
    dim = krull_dim(b)
    diag["dimension"] = dim
    if dim != d - k:
        diag["reason"] = f"dimension {dim} at 0, expected {d - k}"
        return False, diag
    sing = _vdim_of(list(g.generators) + minors(jacobian(g.generators), k), d)
    diag["singular_length"] = sing
    if sing is INFINITE:
        diag["reason"] = "singular locus is not isolated"
        return False, diag
    return True, diag


def critical_ring_length(s: SmoothingSpec) -> int:
    """Multiplicity of the discriminant: length of O/(F_1..F_r, (r+1)-minors)."""
    s = s.reduced()
    nu = _vdim_of(s.critical_ideal(), s.ambient_dim)
    if nu is INFINITE:
        raise NotICISError("critical locus is not zero-dimensional: not a smoothing of an ICIS")
    return nu


def random_invertible(k: int, rng: random.Random, bound: int = COEFF_BOUND) -> List[List[int]]:
    while True:
        m = [[rng.randint(-bound, bound) for _ in range(k)] for _ in range(k)]
        if _int_det(m) != 0:
            return m


def _int_det(m) -> mpq:
    a = [[mpq(x) for x in row] for row in m]
    n = len(a)
    det = mpq(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            return mpq(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            q = a[r][c] / a[c][c]
            if q:
                a[r] = [x - q * y for x, y in zip(a[r], a[c])]
    return det


def _flag_milnor(gens: Sequence[Poly]) -> Optional[int]:
    """Le-Greuel chain along the given generator order; None if the flag degenerates."""
    d = gens[0].nvars
    mu_prev = 0
    for j in range(1, len(gens) + 1):
        ideal = list(gens[:j - 1]) + minors(jacobian(gens[:j]), j)
        nu = _vdim_of(ideal, d)
        if nu is INFINITE:
            return None
        mu_prev = nu - mu_prev
        if mu_prev < 0:
            return None
    return mu_prev


def milnor(g: GermSpec, trials: int = 5, seed: int = 0, diagnostics: Optional[dict] = None) -> int:
    ok, diag = is_icis(g)
    if not ok:
        raise NotICISError(diag.get("reason", "not an ICIS"))
    if g.k == 1:
        mu = _vdim_of(jacobian(g.generators).rows[0], g.ambient_dim)
        if diagnostics is not None:
            diagnostics.update(trials=0, spread=[mu])
        return mu
    rng = random.Random(seed)
    results = []
    for _ in range(max(1, trials)):
        mix = random_invertible(g.k, rng)
        mixed = [sum((f * a for f, a in zip(g.generators, row)), Poly.zero(g.gens))
                 for row in mix]
        mu = _flag_milnor(mixed)
        if mu is not None:
            results.append(mu)
    if diagnostics is not None:
        diagnostics.update(trials=trials, spread=results)
    if not results:
        raise DegenerateFlagError("all random flags were degenerate")
    return min(results)


def tjurina(g: GermSpec) -> int:
    ok, diag = is_icis(g)
    if not ok:
        raise NotICISError(diag.get("reason", "not an ICIS"))
    return vdim(t1_module(g))


def t1_module(g: GermSpec):
    """Standard basis of the submodule (Jacobian columns) + I*O^k of O^k."""
    k, d = g.k, g.ambient_dim
    jac = jacobian(g.generators)
    zero = Poly.zero(g.gens)
    gens = [tuple(jac[i, j] for i in range(k)) for j in range(d)]
    for f in g.generators:
        for slot in range(k):
            gens.append(tuple(f if i == slot else zero for i in range(k)))
    return std_basis_module(gens, k, nvars=d)


def le_greuel_check(s: SmoothingSpec, trials: int = 5, seed: int = 0) -> Tuple[int, int, int, bool]:
    """(mu(X), mu(Z), nu(D_f, 0), mu(X) + mu(Z) == nu)."""
    red = s.reduced()
    x = red.total_space()
    mu_x = milnor(x, trials, seed) if x is not None else 0
    mu_z = milnor(red.fiber(), trials, seed)
    nu = critical_ring_length(red)
    return mu_x, mu_z, nu, mu_x + mu_z == nu


def invariant_report(s: SmoothingSpec, germ: GermSpec, trials: int = 5, seed: int = 0) -> InvariantReport:
    mu_x, mu_z, nu, ok = le_greuel_check(s, trials, seed)
    rep = InvariantReport(mu=mu_z, tau=tjurina(germ), nu=nu, mu_total=mu_x)
    rep.flags["le_greuel"] = ok
    return rep

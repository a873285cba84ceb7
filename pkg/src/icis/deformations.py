"""First-order deformations, semiuniversal families and line smoothings."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .invariants import (COEFF_BOUND, DegenerateFlagError, GermSpec, NotICISError,
                         SmoothingSpec, critical_ring_length, is_icis, milnor, t1_module)
from .localalg import kbase
from .polyforms import Poly


class NonGenericLineError(RuntimeError):
    """The chosen line meets the discriminant non-transversally; retry with another alpha."""

    code = "NON-GENERIC"
    retryable = True


@dataclass(frozen=True)
class SemiuniversalSpec:
    germ: GermSpec
    basis: Tuple[Tuple[Poly, ...], ...]
    generators: Tuple[Poly, ...]
    params: Tuple[str, ...]

    @property
    def tau(self) -> int:
        return len(self.basis)

    def specialize(self, values: Sequence) -> Tuple[Poly, ...]:
        """Substitute numbers for the deformation parameters."""
        nz = self.germ.ambient_dim
        out = []
        for g in self.generators:
            for j in range(len(self.params) - 1, -1, -1):
                g = g.subs(nz + j, Poly.const(g.gens, values[j])).drop_var(nz + j)
            out.append(g)
        return tuple(out)


@dataclass(frozen=True)
class MuMinimalResult:
    alpha: Tuple[mpq, ...]
    smoothing: SmoothingSpec
    mu_X: int
    mu_Z: int
    nu: int
    trials_used: int


def t1_basis(g: GermSpec) -> List[Tuple[Poly, ...]]:
    """Monomial vectors spanning T^1, each with a single nonzero slot."""
    ok, diag = is_icis(g)
    if not ok:
        raise NotICISError(diag.get("reason", "not an ICIS"))
    zero = Poly.zero(g.gens)
    out = []
    for slot, m in kbase(t1_module(g)):
        mono = Poly.monomial(g.gens, m)
        out.append(tuple(mono if i == slot else zero for i in range(g.k)))
    return out


def semiuniversal(g: GermSpec) -> SemiuniversalSpec:
    basis = t1_basis(g)
    params = tuple(_param_names(g.gens, len(basis)))
    allg = g.gens + params
    nz = g.ambient_dim
    gens = []
    for i, f in enumerate(g.generators):
        G = f.embed(allg)
        for j, vec in enumerate(basis):
            if vec[i]:
                G = G + vec[i].embed(allg) * Poly.var(allg, nz + j)
        gens.append(G)
    return SemiuniversalSpec(g, tuple(basis), tuple(gens), params)


def _param_names(taken: Sequence[str], n: int) -> List[str]:
    out, i = [], 0
    while len(out) < n:
        cand = f"t{i}"
        if cand not in taken:
            out.append(cand)
        i += 1
    return out


def _line_var(taken: Sequence[str]) -> str:
    cand = "t"
    while cand in taken:
        cand += "_"
    return cand


def line_smoothing(g: GermSpec, alpha: Sequence) -> SmoothingSpec:
    """Total space V(f_i - alpha_i t) in C^{d+1} with fiber function F = t."""
    alpha = tuple(mpq(a) for a in alpha)
    if len(alpha) != g.k:
        raise ValueError(f"need {g.k} line parameters, got {len(alpha)}")
    if not any(alpha):
        raise ValueError("alpha = 0 does not define a smoothing")
    names = g.gens + (_line_var(g.gens),)
    t = Poly.var(names, g.ambient_dim)
    total = tuple(f.embed(names) - t * a for f, a in zip(g.generators, alpha))
    s = SmoothingSpec(total, t, alpha)
    red = s.reduced()
    x = red.total_space()
    if x is not None:
        ok, _ = is_icis(x)
        if not ok:
            raise NonGenericLineError(f"alpha={[str(a) for a in alpha]} gives a non-isolated total space")
    return s


def random_alpha(k: int, rng: random.Random, bound: int = COEFF_BOUND) -> Tuple[mpq, ...]:
    while True:
        a = tuple(mpq(rng.randint(-bound, bound)) for _ in range(k))
        if any(a):
            return a


def mu_minimal(g: GermSpec, trials: int = 5, seed: int = 0) -> MuMinimalResult:
    """Smallest mu(X) among `trials` random lines t -> alpha*t in the base C^k of the germ.

    The Le-Greuel triple of the winning line is returned; non-generic lines are skipped.
    """
    ok, diag = is_icis(g)
    if not ok:
        raise NotICISError(diag.get("reason", "not an ICIS"))
    rng = random.Random(seed)
    mu_z = milnor(g, trials, seed)
    best: Optional[MuMinimalResult] = None
    used = 0
    for _ in range(max(1, trials)):
        alpha = random_alpha(g.k, rng)
        used += 1
        try:
            s = line_smoothing(g, alpha)
        except NonGenericLineError:
            continue
        red = s.reduced()
        x = red.total_space()
        try:
            mu_x = milnor(x, trials, seed) if x is not None else 0
            nu = critical_ring_length(red)
        except (NotICISError, DegenerateFlagError):
            continue
        if best is None or mu_x < best.mu_X:
            best = MuMinimalResult(alpha, s, mu_x, mu_z, nu, used)
    if best is None:
        raise DegenerateFlagError("every random line was degenerate")
    return MuMinimalResult(best.alpha, best.smoothing, best.mu_X, best.mu_Z, best.nu, used)

"""Standard bases in the local ring Q[z]_(z) via Mora's tangent cone algorithm.

The monomial order is the local degree reverse lexicographic order (``ds``):
lower total degree is *larger*, ties broken by reverse lexicographic
comparison, so ``1 > z_i`` for every variable.  Submodules of a free module
use the term-over-position extension.

Quotient dimensions are read off the leading-term ideal only.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement
from typing import Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .polyforms import Monomial, Poly


class _Infinite:
    """Distinguished value returned by :func:`vdim` for non-Artinian quotients."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITE"

    def __reduce__(self):
        return (_Infinite, ())


INFINITE = _Infinite()


class MoraIterationError(RuntimeError):
    """The normal form loop exceeded its safety cap (an internal bug, not bad input)."""


@dataclass(frozen=True)
class LocalOrder:
    nvars: int
    priority: Tuple[int, ...] = ()

    def __post_init__(self):
        pr = self.priority or tuple(range(self.nvars))
        if sorted(pr) != list(range(self.nvars)):
            raise ValueError(f"priority {pr} is not a permutation of the variables")
        object.__setattr__(self, "priority", tuple(pr))

    @property
    def kind(self) -> str:
        return "ds"

    def key(self, e: Sequence[int]):
        """Larger key = larger monomial (so the constant 1 is the maximum)."""
        pe = [e[i] for i in self.priority]
        return (-sum(pe), tuple(-x for x in reversed(pe)))

    def term_key(self, ct):
        c, e = ct
        return (self.key(e), -c)


# ---------------------------------------------------------------------------
# internal vectors: dict {(component, exps): coefficient}

Term = Tuple[int, Tuple[int, ...]]


class _Elt:
    __slots__ = ("terms", "lt", "lc", "ecart")

    def __init__(self, terms: Dict[Term, mpq], order: LocalOrder):
        self.terms = terms
        if terms:
            self.lt = max(terms, key=order.term_key)
            self.lc = terms[self.lt]
            self.ecart = max(sum(e) for _, e in terms) - sum(self.lt[1])
        else:
            self.lt = None
            self.lc = None
            self.ecart = 0


def _divides(a: Term, b: Term) -> bool:
    return a[0] == b[0] and all(x <= y for x, y in zip(a[1], b[1]))


def _truncated(h: _Elt, corner: Optional[int], order: LocalOrder) -> _Elt:
    if corner is None or all(sum(e) < corner for _, e in h.terms):
        return h
    return _Elt({k: v for k, v in h.terms.items() if sum(k[1]) < corner}, order)


def _reduce_step(h: _Elt, g: _Elt, order: LocalOrder, corner: Optional[int] = None) -> _Elt:
    q = h.lc / g.lc
    shift = tuple(y - x for x, y in zip(g.lt[1], h.lt[1]))
    out = dict(h.terms)
    for (c, e), v in g.terms.items():
        e = tuple(a + b for a, b in zip(e, shift))
        if corner is not None and sum(e) >= corner:
            continue
        key = (c, e)
        w = out.get(key, 0) - q * v
        if w:
            out[key] = w
        else:
            out.pop(key, None)
    return _Elt(out, order)


def _mora_nf(f: _Elt, basis: Sequence[_Elt], order: LocalOrder,
             cap: int = 200000, corner: Optional[int] = None) -> _Elt:
    # Mora's normal form: reducers chosen with minimal ecart, ties by insertion order.
    # With a corner c the ideal contains m^c, so terms of degree >= c are dropped.
    h = _truncated(f, corner, order)
    t_set = list(basis)
    steps = 0
    while h.terms:
        best = None
        for g in t_set:
            if _divides(g.lt, h.lt) and (best is None or g.ecart < best.ecart):
                best = g
                if g.ecart == 0:
                    break
        if best is None:
            break
        if best.ecart > h.ecart:
            t_set.append(h)
        h = _reduce_step(h, best, order, corner)
        steps += 1
        if steps > cap:
            raise MoraIterationError("Mora normal form did not terminate within the cap")
    return h


def _lcm(a: Term, b: Term) -> Tuple[int, ...]:
    return tuple(max(x, y) for x, y in zip(a[1], b[1]))


def _spoly(f: _Elt, g: _Elt, order: LocalOrder) -> _Elt:
    lcm = _lcm(f.lt, g.lt)
    out: Dict[Term, mpq] = {}
    for elt, coef in ((f, 1 / f.lc), (g, -1 / g.lc)):
        shift = tuple(l - x for x, l in zip(elt.lt[1], lcm))
        for (c, e), v in elt.terms.items():
            key = (c, tuple(a + b for a, b in zip(e, shift)))
            w = out.get(key, 0) + coef * v
            if w:
                out[key] = w
            else:
                out.pop(key, None)
    return _Elt(out, order)


def _find_corner(lead: List[Term], rank: int, nvars: int) -> Optional[int]:
    """Least c with every monomial of degree >= c in the leading module, if any."""
    top = -1
    for comp in range(rank):
        lc = [e for (k, e) in lead if k == comp]
        if any(sum(e) == 0 for e in lc):
            continue
        bounds = _component_bounds(lc, nvars)
        if bounds is None:
            return None
        top = max([top] + [sum(e) for e in _standard_monomials(lc, bounds)])
    return top + 1


def _standard_basis(gens: List[_Elt], order: LocalOrder,
                    rank: int = 1) -> Tuple[List[_Elt], Optional[int]]:
    basis: List[Optional[_Elt]] = []
    pairs: List[Tuple[int, int]] = []
    corner: List[Optional[int]] = [None]

    def add(h: _Elt):
        m = len(basis)
        basis.append(h)
        new = []
        for i in range(m):
            g = basis[i]
            if g is None or g.lt[0] != h.lt[0]:
                continue
            new.append((i, m))
        # discard old pairs whose lcm is a proper multiple handled through h
        keep = []
        for (i, j) in pairs:
            l = _lcm(basis[i].lt, basis[j].lt)
            if basis[i].lt[0] == h.lt[0] and all(x <= y for x, y in zip(h.lt[1], l)) \
                    and _lcm(basis[i].lt, h.lt) != l and _lcm(basis[j].lt, h.lt) != l:
                continue
            keep.append((i, j))
        pairs[:] = keep
        pairs.extend(new)
        if corner[0] is None:
            c = _find_corner([g.lt for g in basis if g is not None], rank, order.nvars)
            if c is not None:
                corner[0] = c
                for k, g in enumerate(basis):
                    if g is not None:
                        g = _truncated(g, c, order)
                        basis[k] = g if g.terms else None
                pairs[:] = [(i, j) for i, j in pairs
                            if basis[i] is not None and basis[j] is not None]

    def live():
        return [g for g in basis if g is not None]

    for g in sorted((g for g in gens if g.terms),
                    key=lambda g: order.term_key(g.lt), reverse=True):
        h = _mora_nf(g, live(), order, corner=corner[0])
        if h.terms:
            add(h)
    while pairs:
        # lowest lcm degree first
        pairs.sort(key=lambda p: -sum(_lcm(basis[p[0]].lt, basis[p[1]].lt)))
        i, j = pairs.pop()
        f, g = basis[i], basis[j]
        if f.lt[0] == g.lt[0] and all(min(x, y) == 0 for x, y in zip(f.lt[1], g.lt[1])) \
                and len({c for c, _ in f.terms} | {c for c, _ in g.terms}) == 1:
            continue  # product criterion (ideal case)
        s = _spoly(f, g, order)
        if not s.terms:
            continue
        h = _mora_nf(s, live(), order, corner=corner[0])
        if h.terms:
            add(h)
    # minimalize: drop elements whose leading term is divisible by another one
    basis = live()
    result = []
    for k, g in enumerate(basis):
        if any(_divides(o.lt, g.lt) and (o.lt != g.lt or m < k)
               for m, o in enumerate(basis) if m != k):
            continue
        result.append(g)
    return result, corner[0]


# ---------------------------------------------------------------------------
# public types


@dataclass(frozen=True)
class Ideal:
    generators: Tuple[Poly, ...]
    order: LocalOrder

    @classmethod
    def of(cls, gens: Sequence[Poly], nvars: int | None = None,
           priority: Sequence[int] = ()) -> "Ideal":
        gens = tuple(g for g in gens if g)
        if nvars is None:
            if not gens:
                raise ValueError("cannot infer the number of variables of the zero ideal")
            nvars = gens[0].nvars
        return cls(gens, LocalOrder(nvars, tuple(priority)))


@dataclass
class StdBasis:
    elements: List[Poly]
    order: LocalOrder
    leading: List[Tuple[int, ...]] = field(default_factory=list)
    _elts: List[_Elt] = field(default_factory=list, repr=False)
    _gens: Tuple[str, ...] = ()
    # the ideal contains m^corner; elements are stored modulo it
    corner: Optional[int] = None

    @property
    def rank(self) -> int:
        return 1

    def is_unit(self) -> bool:
        return any(sum(e) == 0 for e in self.leading)


@dataclass
class SubmoduleBasis:
    elements: List[Tuple[Poly, ...]]
    rank: int
    order: LocalOrder
    leading: List[Term] = field(default_factory=list)
    _elts: List[_Elt] = field(default_factory=list, repr=False)
    _gens: Tuple[str, ...] = ()
    corner: Optional[int] = None


def _poly_to_elt(p: Poly, order: LocalOrder) -> _Elt:
    return _Elt({(0, e): c for e, c in p.terms.items()}, order)


def _vec_to_elt(v: Sequence[Poly], order: LocalOrder) -> _Elt:
    terms = {}
    for c, p in enumerate(v):
        for e, a in p.terms.items():
            terms[(c, e)] = a
    return _Elt(terms, order)


def _elt_to_poly(x: _Elt, gens) -> Poly:
    return Poly(gens, {e: a for (_, e), a in x.terms.items()}, _clean=True)


def _elt_to_vec(x: _Elt, gens, rank: int) -> Tuple[Poly, ...]:
    comps: List[Dict] = [{} for _ in range(rank)]
    for (c, e), a in x.terms.items():
        comps[c][e] = a
    return tuple(Poly(gens, t, _clean=True) for t in comps)


def std_basis(ideal: Ideal | Sequence[Poly]) -> StdBasis:
    if not isinstance(ideal, Ideal):
        ideal = Ideal.of(ideal)
    order = ideal.order
    gens = ideal.generators[0].gens if ideal.generators else tuple(
        f"z{i + 1}" for i in range(order.nvars))
    elts, corner = _standard_basis([_poly_to_elt(g, order) for g in ideal.generators], order)
    if corner == 0:
        elts = [_poly_to_elt(Poly.const(gens, 1), order)]
    return StdBasis([_elt_to_poly(x, gens) for x in elts], order,
                    [e for _, e in _lead_with_corner(elts, corner, 1, order.nvars)], elts, gens,
                    corner)


def std_basis_module(gens: Sequence[Sequence[Poly]], rank: int,
                     order: LocalOrder | None = None, nvars: int | None = None) -> SubmoduleBasis:
    gens = [tuple(v) for v in gens]
    if any(len(v) != rank for v in gens):
        raise ValueError(f"generator of the wrong rank (expected {rank})")
    if order is None:
        if nvars is None:
            nvars = next((p.nvars for v in gens for p in v), None)
            if nvars is None:
                raise ValueError("cannot infer the number of variables")
        order = LocalOrder(nvars)
    names = next((p.gens for v in gens for p in v), tuple(f"z{i + 1}" for i in range(order.nvars)))
    elts, corner = _standard_basis([_vec_to_elt(v, order) for v in gens], order, rank)
    return SubmoduleBasis([_elt_to_vec(x, names, rank) for x in elts], rank, order,
                          _lead_with_corner(elts, corner, rank, order.nvars), elts, names, corner)


def _lead_with_corner(elts: List[_Elt], corner: Optional[int], rank: int,
                      nvars: int) -> List[Term]:
    lead = [x.lt for x in elts]
    for c in range(rank):
        for e in _corner_powers(corner, nvars):
            if not any(_divides(t, (c, e)) for t in lead):
                lead.append((c, e))
    return lead


def _corner_powers(corner: Optional[int], nvars: int) -> List[Tuple[int, ...]]:
    """All monomials of degree ``corner``; they lie in the ideal once a corner is known."""
    if corner is None:
        return []
    out = []
    for combo in combinations_with_replacement(range(nvars), corner):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def mora_nf(p, basis: StdBasis | SubmoduleBasis):
    """Weak normal form: zero exactly when p lies in the (localized) ideal/submodule."""
    order = basis.order
    if isinstance(basis, StdBasis):
        if not isinstance(p, Poly):
            raise TypeError("expected a Poly for an ideal standard basis")
        h = _mora_nf(_poly_to_elt(p, order), basis._elts, order, corner=basis.corner)
        return _elt_to_poly(h, p.gens)
    v = tuple(p)
    if len(v) != basis.rank:
        raise ValueError("vector of the wrong rank")
    h = _mora_nf(_vec_to_elt(v, order), basis._elts, order, corner=basis.corner)
    return _elt_to_vec(h, v[0].gens, basis.rank)


def contains(basis: StdBasis | SubmoduleBasis, p) -> bool:
    r = mora_nf(p, basis)
    return (not r) if isinstance(r, Poly) else all(not c for c in r)


# ---------------------------------------------------------------------------
# leading-term combinatorics


def _leading_terms(basis) -> List[Term]:
    if isinstance(basis, StdBasis):
        return [(0, e) for e in basis.leading]
    return list(basis.leading)


def _component_bounds(lead: List[Tuple[int, ...]], nvars: int):
    """Pure-power bounds per variable, or None if some variable has none."""
    bounds = []
    for i in range(nvars):
        best = None
        for e in lead:
            if all(e[j] == 0 for j in range(nvars) if j != i):
                best = e[i] if best is None else min(best, e[i])
        if best is None:
            return None
        bounds.append(best)
    return bounds


def _standard_monomials(lead: List[Tuple[int, ...]], bounds: List[int]) -> List[Tuple[int, ...]]:
    out = []
    nvars = len(bounds)

    def rec(prefix):
        i = len(prefix)
        if i == nvars:
            e = tuple(prefix)
            if not any(all(a <= b for a, b in zip(m, e)) for m in lead):
                out.append(e)
            return
        for k in range(bounds[i]):
            prefix.append(k)
            # prune: the prefix padded with zeros is already divisible
            pad = tuple(prefix) + (0,) * (nvars - i - 1)
            if any(all(a <= b for a, b in zip(m, pad)) for m in lead):
                prefix.pop()
                break
            rec(prefix)
            prefix.pop()

    rec([])
    return out


def vdim(basis: StdBasis | SubmoduleBasis):
    """dim_Q of the quotient, or INFINITE when it is not finite."""
    lead = _leading_terms(basis)
    nvars = basis.order.nvars
    total = 0
    for c in range(basis.rank):
        lc = [e for (k, e) in lead if k == c]
        if any(sum(e) == 0 for e in lc):
            continue
        bounds = _component_bounds(lc, nvars)
        if bounds is None:
            return INFINITE
        total += len(_standard_monomials(lc, bounds))
    return total


def kbase(basis: StdBasis | SubmoduleBasis):
    """Monomials (or (component, monomial) pairs) outside the leading-term module.

    Listed by increasing degree, i.e. descending in the local order.
    """
    lead = _leading_terms(basis)
    order = basis.order
    nvars = order.nvars
    out = []
    for c in range(basis.rank):
        lc = [e for (k, e) in lead if k == c]
        if any(sum(e) == 0 for e in lc):
            continue
        bounds = _component_bounds(lc, nvars)
        if bounds is None:
            raise ValueError("kbase of an infinite-dimensional quotient")
        out.extend((c, Monomial(e)) for e in _standard_monomials(lc, bounds))
    out.sort(key=lambda ce: order.term_key(ce), reverse=True)
    if isinstance(basis, StdBasis):
        return [m for _, m in out]
    return out


def krull_dim(basis: StdBasis | SubmoduleBasis) -> int:
    """Dimension of the quotient ring O/I at the origin; -1 for the unit ideal."""
    if not isinstance(basis, StdBasis):
        raise TypeError("krull_dim is implemented for ideals only")
    lead = basis.leading
    d = basis.order.nvars
    if any(sum(e) == 0 for e in lead):
        return -1
    for size in range(d, -1, -1):
        for s in combinations(range(d), size):
            sset = set(s)
            if not any(all(k == 0 or i in sset for i, k in enumerate(e)) for e in lead):
                return size
    return 0

"""Brieskorn lattice of a smoothing, its (t d/dt)-saturation and the residue b-function.

Everything happens in a finite jet model: with P_N the polynomials of weighted
degree <= N, the quotient of P_N by the truncated relations

    coefficients of dF_1^...^dF_r^dF^d(beta),  I * O,  F^M * O

is H''/t^M H'' exactly once its dimension equals mu*M.  A class h stands for
h dz / (dF_1^...^dF_r^dF).  For an n-form eta put

    A(eta) = coeff of dF_1^...^dF_r^dF^eta,   B(eta) = coeff of dF_1^...^dF_r^d(eta);

then d/dt [A(eta)] = [B(eta)], which is how the connection is computed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from flint import nmod_poly
from gmpy2 import mpq

from .echelon import Echelon, Row
from .fields import PRIMES, QQ, BadPrimeError, PrimeField
from .invariants import GermSpec, NotICISError, SmoothingSpec, milnor
from .localalg import Ideal, contains, std_basis
from .polyforms import DiffForm, Poly, d_function, q_str, wedge_all

Exps = Tuple[int, ...]


class RankMismatchError(RuntimeError):
    """The jet model at order N is not yet the full quotient H''/t^M H''."""

    code = "RANK-MISMATCH"


class PrecisionError(RuntimeError):
    """The t-adic precision M is too small for the requested computation."""

    code = "PRECISION"


class NotInvertibleError(ArithmeticError):
    """The d/dt^{-1} jet system has no solution."""

    code = "NOT-INVERTIBLE"


class SaturationError(RuntimeError):
    """t d/dt saturation did not stabilise within the iteration cap."""

    code = "NON-STABILIZATION"


class NonSplitError(ArithmeticError):
    """A minimal polynomial without a full set of rational roots."""

    code = "NON-SPLIT"


@dataclass(frozen=True)
class GLClass:
    """The class of h * dz/(dF_1^...^dF_r^dF), h a jet of order N."""

    h: Poly
    order: int

    def __str__(self) -> str:
        return str(self.h)


# -- small dense linear algebra over Q ----------------------------------------

def _solve_matrix(cols: List[List[mpq]], rhs: List[List[mpq]], K=QQ):
    """Solve sum_k x_k cols[k] = b for each b in rhs; None where unsolvable."""
    n = len(cols)
    if n == 0:
        return [[] if all(v == 0 for v in b) else None for b in rhs]
    m = len(cols[0])
    zero = K(0)
    # augmented rows: each row is an equation (coordinate)
    a = [[cols[k][i] for k in range(n)] + [b[i] for b in rhs] for i in range(m)]
    piv_cols = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(m):
            if i != r and a[i][c]:
                q = a[i][c]
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
        if r == m:
            break
    out = []
    for j in range(len(rhs)):
        if any(a[i][n + j] for i in range(r, m)):
            out.append(None)
            continue
        x = [zero] * n
        for i, c in enumerate(piv_cols):
            x[c] = a[i][n + j]
        out.append(x)
    return out


class _Basis:
    """Incremental basis of a subspace with membership test (dense rows, reduced echelon)."""

    def __init__(self, n: int):
        self.n = n
        self.rows: Dict[int, List[mpq]] = {}

    def reduce(self, v: List[mpq]) -> List[mpq]:
        v = list(v)
        for c, row in self.rows.items():
            if v[c]:
                q = v[c]
                v = [x - q * y for x, y in zip(v, row)]
        return v

    def add(self, v: List[mpq]) -> bool:
        v = self.reduce(v)
        c = next((i for i, x in enumerate(v) if x), None)
        if c is None:
            return False
        inv = 1 / v[c]
        v = [x * inv for x in v]
        for k, row in self.rows.items():
            if row[c]:
                q = row[c]
                self.rows[k] = [x - q * y for x, y in zip(row, v)]
        self.rows[c] = v
        return True

    def __len__(self) -> int:
        return len(self.rows)


# -- weights and monomials ----------------------------------------------------

def quasi_weights(polys: Sequence[Poly]) -> Optional[Tuple[int, ...]]:
    """Positive integer weights making every poly weighted homogeneous, if any."""
    import sympy

    eqs = []
    for p in polys:
        exps = list(p.terms)
        for e in exps[1:]:
            eqs.append([a - b for a, b in zip(e, exps[0])])
    if not eqs:
        return None
    ns = sympy.Matrix(eqs).nullspace()
    if len(ns) != 1:
        return None
    v = ns[0]
    if all(x <= 0 for x in v):
        v = -v
    if not all(x > 0 for x in v):
        return None
    den = sympy.ilcm(*[sympy.fraction(x)[1] for x in v])
    w = [int(x * den) for x in v]
    g = math.gcd(*w)
    return tuple(x // g for x in w)


def _wdeg(e: Exps, w: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(e, w))


def _monomials_upto(d: int, w: Sequence[int], n: int) -> List[Exps]:
    out: List[Exps] = []

    def rec(i, prefix, budget):
        if i == d:
            out.append(tuple(prefix))
            return
        for a in range(budget // w[i] + 1):
            prefix.append(a)
            rec(i + 1, prefix, budget - a * w[i])
            prefix.pop()
    rec(0, [], n)
    return out


def _shift(p: Sequence[Tuple[Exps, mpq]], a: Exps) -> List[Tuple[Exps, mpq]]:
    return [(tuple(x + y for x, y in zip(e, a)), c) for e, c in p]


def _top(forms: List[DiffForm], gens) -> Poly:
    w = wedge_all(forms, gens)
    if w.degree != len(gens):
        raise ValueError("not a top form")
    return w.top_coeff()


# -- the jet lattice ------------------------------------------------------------

class JetLattice:
    """H''/t^M H'' of a smoothing, with a C{t}-basis and the connection t^p d/dt.

    ``connection[k][i][j]`` is the coefficient of t^k e_i in t^p d/dt (e_j),
    valid for k < ``precision``.
    """

    def __init__(self, s: SmoothingSpec, N: int, M: int, mu: Optional[int] = None,
                 weights: Optional[Sequence[int]] = None, field=QQ):
        if N < 1 or M < 1:
            raise ValueError("jet orders must be positive")
        red = s.reduced()
        self.smoothing = red
        self.N, self.M = N, M
        self.K = field
        d = red.ambient_dim
        self.weights = tuple(weights) if weights is not None else (1,) * d
        if len(self.weights) != d or any(x <= 0 for x in self.weights):
            raise ValueError("weights must be positive, one per variable of the reduced chart")
        self.mu = milnor(red.fiber()) if mu is None else mu
        self.n = red.fiber_dim
        if self.mu == 0:
            self._empty()
        else:
            self._setup()

    def _empty(self):
        # smooth fiber: H'' = 0
        self.columns, self.index, self.std_columns = [], {}, []
        self.dim_q = self.dim_q1 = 0
        self.basis = ()
        self.pole_order, self.connection, self.precision = 0, [], self.M
        self._ES = Echelon()
        self._ESA = self._ESB = None
        self._A, self._B, self._rel, self._ideal = {}, {}, [], []
        self._spos, self._tinv = {}, []

    # -- construction --
    def _setup(self):
        s, N, w, K = self.smoothing, self.N, self.weights, self.K
        gens = s.gens
        d = len(gens)
        n = self.n
        monos = _monomials_upto(d, w, N)
        monos.sort(key=lambda e: (_wdeg(e, w), tuple(-x for x in reversed(e))))
        self.columns: List[Exps] = monos
        self.index: Dict[Exps, int] = {e: i for i, e in enumerate(monos)}
        dFs = [d_function(f) for f in s.total]
        dF = d_function(s.function)
        # A(dz_I) for |I| = n, relations A(dz_j ^ dz_K) for |K| = n-1, B(dz_j ^ dz_I)
        self._A = {I: _top(dFs + [dF, DiffForm.dz(gens, *I)], gens)
                   for I in combinations(range(d), n)}
        self._B = {(j, I): _top(dFs + [DiffForm.dz(gens, j, *I)], gens)
                   for I in combinations(range(d), n) for j in range(d) if j not in I}
        rel = []
        if n >= 1:
            for ks in combinations(range(d), n - 1):
                parts = {j: _top(dFs + [dF, DiffForm.dz(gens, j, *ks)], gens)
                         for j in range(d) if j not in ks}
                rel.append({j: list(p.terms.items()) for j, p in parts.items() if p})
        self._rel = rel
        self._ideal = [list(f.terms.items()) for f in s.total]
        self._F = s.function
        FM = (s.function ** self.M).truncate(None)
        s0 = Echelon()
        rows = []
        for a in monos:
            for g in self._ideal:
                rows.append(self._row(_shift(g, a)))
        for a in _monomials_upto(d, w, N + max(w)):
            for parts in rel:
                terms = []
                for j, p in parts.items():
                    if a[j]:
                        b = list(a)
                        b[j] -= 1
                        terms += [(e, c * a[j]) for e, c in _shift(p, tuple(b))]
                rows.append(self._row(terms))
        if n == 0:
            # reduced cohomology of a finite fiber: the classes of constant functions vanish
            c0 = self._A[()]
            fk = Poly.const(gens, 1)
            while fk and _low_wdeg(fk, w) + _low_wdeg(c0, w) <= N:
                rows.append(self._row(list((fk * c0).terms.items())))
                fk = fk * s.function
        rows = [r for r in rows if r]
        rows.sort(key=min)
        for r in rows:
            s0.insert(r)
        fterms = list(s.function.terms.items())
        fmterms = list(FM.terms.items())
        e1 = s0.copy()
        es = s0
        for a in monos:
            r1 = self._row(_shift(fterms, a))
            if r1:
                e1.insert(r1)
            rm = self._row(_shift(fmterms, a))
            if rm:
                es.insert(rm)
        self._ES = es
        std = [c for c in range(len(monos)) if c not in es.pivots]
        self.std_columns = std
        self.dim_q = len(std)
        basis_cols = [c for c in range(len(monos)) if c not in e1.pivots]
        self.dim_q1 = len(basis_cols)
        mu, M = self.mu, self.M
        if self.dim_q != mu * M or self.dim_q1 != mu:
            raise RankMismatchError(
                f"jet order N={N}: quotient has dimension {self.dim_q} (expected {mu * M}), "
                f"fiber quotient {self.dim_q1} (expected {mu})")
        self.basis = tuple(GLClass(Poly.monomial(gens, monos[c]), N) for c in basis_cols)
        # change of basis: columns nf(F^k e_j) on the standard monomials
        spos = {c: i for i, c in enumerate(std)}
        self._spos = spos
        cols = []
        fk = Poly.const(gens, 1)
        for k in range(M):
            for b in self.basis:
                v, _ = es.reduce(self._row(list((fk * b.h).truncate(None).terms.items())))
                vec = [K(0)] * len(std)
                for c, x in v.items():
                    vec[spos[c]] = x
                cols.append(vec)
            fk = fk * s.function
        # invert via solving against unit vectors
        units = [[K(1) if i == j else K(0) for i in range(len(std))] for j in range(len(std))]
        inv = _solve_matrix(cols, units, K)
        if any(x is None for x in inv):
            raise RankMismatchError("powers of F times the fiber basis do not span the quotient")
        self._tinv = inv  # inv[j] = coordinates of the j-th standard monomial
        self._ESA = None
        self._ESB = None
        self.pole_order = None
        self.connection = None
        self.precision = None
        if mu:
            self._connection()

    def _row(self, terms) -> Row:
        idx, w, N, K = self.index, self.weights, self.N, self.K
        row: Row = {}
        for e, c in terms:
            if _wdeg(e, w) > N:
                continue
            i = idx[e]
            v = row.get(i)
            if v is None:
                c = K(c)
                if c:
                    row[i] = c
            else:
                v = v + K(c)
                if v:
                    row[i] = v
                else:
                    del row[i]
        return row

    def row_of(self, h: Poly) -> Row:
        if h.gens != self.smoothing.gens:
            raise ValueError("class over a different chart")
        return self._row(h.terms.items())

    @property
    def exact(self) -> bool:
        return self.K.modulus is None

    def poly_of(self, row: Row) -> Poly:
        if not self.exact:
            raise TypeError("class representatives need a lattice over Q")
        return Poly(self.smoothing.gens, {self.columns[c]: v for c, v in row.items()})

    def _a_rows(self):
        for a in self.columns:
            for I, C in self._A.items():
                if not C:
                    continue
                arow = self._row(_shift(list(C.terms.items()), a))
                if not arow:
                    continue
                bterms = []
                for (j, J), Bp in self._B.items():
                    if J != I or not a[j] or not Bp:
                        continue
                    b = list(a)
                    b[j] -= 1
                    bterms += [(e, c * a[j]) for e, c in _shift(list(Bp.terms.items()), tuple(b))]
                yield arow, self._row(bterms)

    def _esa(self) -> Echelon:
        if self._ESA is None:
            e = self._ES.copy()
            rows = sorted(self._a_rows(), key=lambda rc: min(rc[0]))
            for arow, brow in rows:
                e.insert(arow, brow)
            self._ESA = e
        return self._ESA

    def _esb(self) -> Echelon:
        if self._ESB is None:
            e = self._ES.copy()
            rows = [(b, a) for a, b in self._a_rows() if b]
            rows.sort(key=lambda rc: min(rc[0]))
            for brow, arow in rows:
                e.insert(brow, arow)
            self._ESB = e
        return self._ESB

    def _connection(self):
        s = self.smoothing
        p = pole_order(s)
        if p >= self.M:
            raise PrecisionError(f"t-order M={self.M} does not exceed the pole order {p}")
        self.pole_order = p
        self.precision = self.M - p
        cols = []
        for e in self.basis:
            target = self.row_of((e.h * s.function ** p).truncate(None))
            vec = self._solve_dt(target)
            if vec is None:
                raise RankMismatchError("t^p e_j is not in the Kaehler image at this jet order")
            extra = (e.h * s.function ** (p - 1)) * p
            for c, x in self.row_of(extra).items():
                vec[c] = vec.get(c, 0) - x
            cols.append(self.series(vec))
        mu = self.mu
        self.connection = [[[cols[j][i][k] for j in range(mu)] for i in range(mu)]
                           for k in range(self.precision)]

    def _solve_dt(self, row: Row) -> Optional[Row]:
        # B(eta) for some eta with A(eta) = row mod relations
        rem, comp = self._esa().reduce(row, track=True)
        if rem:
            return None
        return {c: -v for c, v in comp.items() if v}

    # -- coordinates --
    def series(self, row: Row) -> List[List[mpq]]:
        """Coordinates out[i][k]: coefficient of t^k e_i, k < M."""
        rem, _ = self._ES.reduce(row)
        mu, M = self.mu, self.M
        out = [[self.K(0)] * M for _ in range(mu)]
        for c, x in rem.items():
            col = self._tinv[self._spos[c]]
            for idx, y in enumerate(col):
                if y:
                    k, i = divmod(idx, mu)
                    out[i][k] += x * y
        return out

    def coordinates(self, c: GLClass) -> List[List[mpq]]:
        return self.series(self.row_of(c.h))

    def equal_mod(self, a: GLClass, b: GLClass, order: Optional[int] = None) -> bool:
        """a == b modulo t^order H'' (default: the full model)."""
        order = self.M if order is None else order
        diff = self.series(self.row_of(a.h - b.h))
        return all(x == 0 for row in diff for x in row[:order])

    def is_zero(self, c: GLClass) -> bool:
        rem, _ = self._ES.reduce(self.row_of(c.h))
        return not rem

    def dt(self, c: GLClass) -> GLClass:
        """d/dt on a class in the image of A (the Kaehler part)."""
        out = self._solve_dt(self.row_of(c.h))
        if out is None:
            raise NotInvertibleError("class is not of the form A(eta) in the jet model")
        return GLClass(self.poly_of(out), self.N)


def pole_order(s: SmoothingSpec) -> int:
    """Least p with F^p in the relative Jacobian ideal (F_1..F_r) + (r+1)-minors."""
    s = s.reduced()
    b = std_basis(Ideal.of(s.critical_ideal(), s.ambient_dim))
    fp = Poly.const(s.gens, 1)
    # Briancon-Skoda: F^d lies in the Jacobian ideal
    for k in range(1, s.ambient_dim + 2):
        fp = fp * s.function
        if contains(b, fp):
            return k
    raise NotICISError("F has no power in the Jacobian ideal: critical locus not isolated")


# -- operators on classes -------------------------------------------------------

def build_lattice(s: SmoothingSpec, N: int, M: int, mu: Optional[int] = None,
                  weights: Optional[Sequence[int]] = None) -> JetLattice:
    return JetLattice(s, N, M, mu=mu, weights=weights)


def t_action(L: JetLattice, c: GLClass) -> GLClass:
    """Multiplication by F, truncated at the jet order."""
    if not c.h:
        return GLClass(c.h, L.N)
    prod = L.poly_of(L.row_of((c.h * L.smoothing.function).truncate(None)))
    if not prod:
        raise PrecisionError("F*h lies entirely beyond the jet order")
    return GLClass(prod, L.N)


def dt_inverse(L: JetLattice, c: GLClass) -> GLClass:
    """Solve B(eta) = h modulo relations and return the class A(eta)."""
    row = L.row_of(c.h)
    if not row:
        return GLClass(c.h, L.N)
    rem, comp = L._esb().reduce(row, track=True)
    if rem:
        raise NotInvertibleError("d/dt^{-1} jet system is unsolvable at this order")
    return GLClass(L.poly_of({k: -v for k, v in comp.items() if v}), L.N)


# -- Laurent vectors in the C{t}-basis ------------------------------------------
#
# A vector is a dict {(m, i): c} standing for sum c t^m e_i.  During saturation
# only polar parts matter: dropping a t^{>=0} tail changes t d/dt of a vector
# by an element of t d/dt(H''), which already lies in the lattice.

LVec = Dict[Tuple[int, int], mpq]


def _theta(L: JetLattice, x: LVec, need: int) -> LVec:
    """t d/dt applied to x; D-truncation errors must land in t^need H''."""
    p, P = L.pole_order, L.precision
    out: LVec = {}
    for (m, i), v in x.items():
        if m + 1 - p + P < need:
            raise PrecisionError(f"t-order M={L.M} too small (pole t^{m}, pole order {p})")
        if m:
            out[(m, i)] = out.get((m, i), 0) + m * v
        for k in range(P):
            col = L.connection[k]
            for j in range(L.mu):
                y = col[j][i]
                if y:
                    key = (m + 1 - p + k, j)
                    out[key] = out.get(key, 0) + v * y
    return {k: v for k, v in out.items() if v}


def _polar(x: LVec) -> LVec:
    return {k: v for k, v in x.items() if k[0] < 0}


@dataclass
class SaturatedLattice:
    lattice: JetLattice
    steps: int
    residue: List[List[mpq]]
    basis: List[LVec] = field(default_factory=list)

    @property
    def rank(self) -> int:
        return len(self.residue)


def _dense(x: LVec, low: int, mu: int, top: int = 0, K=QQ) -> List[mpq]:
    out = [K(0)] * ((top + 1 - low) * mu)
    for (m, i), v in x.items():
        if m > top:
            continue
        if m < low:
            raise PrecisionError("vector outside the pole range of the lattice")
        out[(m - low) * mu + i] = v
    return out


def _span_polar(vecs: List[LVec], low: int, mu: int, K=QQ) -> _Basis:
    # C{t}-span modulo H'', as a subspace of t^low H''/H''
    b = _Basis(-low * mu)
    for v in vecs:
        lo = min((m for m, _ in v), default=0)
        for sh in range(0, -lo):
            moved = {(m + sh, i): c for (m, i), c in v.items() if m + sh < 0}
            if moved:
                b.add(_dense(moved, low, mu, -1, K))
    return b


def saturate(L: JetLattice, cap: Optional[int] = None) -> SaturatedLattice:
    """Saturate H'' under t d/dt and take the residue of -d/dt t modulo t."""
    mu, K = L.mu, L.K
    cap = mu + 2 if cap is None else cap
    if mu == 0:
        return SaturatedLattice(L, 0, [])
    level = [{(0, i): K(1)} for i in range(mu)]
    polar: List[LVec] = []
    dim = 0
    steps = None
    low = 0
    for k in range(1, cap + 2):
        level = [_polar(_theta(L, v, 0)) for v in level]
        polar += [v for v in level if v]
        low = min([low] + [m for v in level for m, _ in v])
        new_dim = len(_span_polar(polar, low, mu, K)) if polar else 0
        if new_dim == dim:
            steps = k - 1
            break
        dim = new_dim
    if steps is None:
        raise SaturationError(f"saturation did not stabilise within {cap} steps")
    # L/tH'' inside t^low H''/tH'': polar span plus H''/tH''
    width = (1 - low) * mu
    lat = _Basis(width)
    for i in range(mu):
        lat.add(_dense({(0, i): K(1)}, low, mu, 0, K))
    for v in _span_polar(polar, low, mu, K).rows.values():
        lat.add(v + [K(0)] * mu)

    def times_t(vec):
        out = [K(0)] * width
        for idx in range(width - mu):
            out[idx + mu] = vec[idx]
        return out

    tl = _Basis(width)
    for v in lat.rows.values():
        tl.add(times_t(v))
    quot = _Basis(width)
    for r in tl.rows.values():
        quot.add(r)
    chosen = [v for v in sorted(lat.rows.values(), key=lambda v: [x == 0 for x in v])
              if quot.add(v)]
    if len(chosen) != mu:
        raise SaturationError(f"saturated lattice has rank {len(chosen)} modulo t, expected {mu}")

    def to_lvec(vec) -> LVec:
        return {(idx // mu + low, idx % mu): x for idx, x in enumerate(vec) if x}

    images = [_dense(_theta(L, to_lvec(v), 1), low, mu, 0, K) for v in chosen]
    sol = _solve_matrix(chosen + list(tl.rows.values()), images, K)
    if any(x is None for x in sol):
        raise SaturationError("t d/dt image left the saturated lattice")
    # residue of -(t d/dt + 1) in the chosen basis
    res = [[-(sol[a][b]) - (1 if a == b else 0) for a in range(mu)] for b in range(mu)]
    return SaturatedLattice(L, steps, res, [to_lvec(v) for v in chosen])


# -- b-function and spectrum -----------------------------------------------------

def _min_poly(A: List[List[mpq]], K=QQ) -> List[mpq]:
    """Monic minimal polynomial, coefficients from constant term upward."""
    n = len(A)
    if n == 0:
        return [K(1)]
    powers = []
    P = [[K(1) if i == j else K(0) for j in range(n)] for i in range(n)]
    for k in range(n + 1):
        flat = [x for row in P for x in row]
        if powers:
            sol = _solve_matrix(powers, [flat], K)[0]
            if sol is not None:
                return [-x for x in sol] + [K(1)]
        powers.append(flat)
        P = [[sum((P[i][l] * A[l][j] for l in range(n)), K(0)) for j in range(n)]
             for i in range(n)]
    raise AssertionError("Cayley-Hamilton violated")


def _fmt_poly(coeffs: Sequence[mpq], var: str = "s") -> str:
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if mono and abs(c) == 1:
            body = mono
        else:
            body = q_str(abs(c)) + ("*" + mono if mono else "")
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    first = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    return first + "".join(f" {sg} {b}" for sg, b in terms[1:])


@dataclass(frozen=True)
class BFunction:
    """Monic polynomial in s, coefficients from the constant term upward."""

    coeffs: Tuple[mpq, ...]
    roots: Optional[Tuple[mpq, ...]] = None

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def split(self) -> bool:
        return self.roots is not None

    def __str__(self) -> str:
        return _fmt_poly(self.coeffs)

    def factored(self) -> str:
        if not self.roots:
            return "1" if self.degree == 0 else str(self)
        parts = []
        for r in sorted(set(self.roots)):
            k = self.roots.count(r)
            lin = "s" if r == 0 else (f"s + {q_str(-r)}" if r < 0 else f"s - {q_str(r)}")
            parts.append(f"({lin})" + (f"^{k}" if k > 1 else ""))
        return "*".join(parts)

    def times_s_plus_one(self) -> "BFunction":
        c = list(self.coeffs)
        out = [mpq(0)] * (len(c) + 1)
        for k, x in enumerate(c):
            out[k] += x
            out[k + 1] += x
        roots = None if self.roots is None else tuple(sorted(self.roots + (mpq(-1),)))
        return BFunction(tuple(out), roots)

    def candidates(self) -> Tuple["BFunction", "BFunction"]:
        """Both possibilities for the full b-function: b-hat and (s+1)*b-hat."""
        return self, self.times_s_plus_one()

    def divides(self, other: "BFunction") -> bool:
        import sympy

        s = sympy.Symbol("s")
        a = sympy.Poly([sympy.Rational(int(x.numerator), int(x.denominator))
                        for x in reversed(self.coeffs)], s)
        b = sympy.Poly([sympy.Rational(int(x.numerator), int(x.denominator))
                        for x in reversed(other.coeffs)], s)
        return b.rem(a).is_zero


def _rational_roots(coeffs: Sequence[mpq]) -> Optional[Tuple[mpq, ...]]:
    import sympy

    s = sympy.Symbol("s")
    poly = sympy.Poly([sympy.Rational(int(x.numerator), int(x.denominator))
                       for x in reversed(coeffs)], s, domain="QQ")
    if poly.degree() == 0:
        return ()
    _, factors = poly.factor_list()
    roots = []
    for fac, mult in factors:
        if fac.degree() != 1:
            return None
        a, b = fac.all_coeffs()
        r = -sympy.Rational(b) / sympy.Rational(a)
        roots += [mpq(int(r.p), int(r.q))] * mult
    return tuple(sorted(roots))


def _expand(roots: Sequence[mpq]) -> Tuple[mpq, ...]:
    out = [mpq(1)]
    for r in roots:
        nxt = [mpq(0)] * (len(out) + 1)
        for k, c in enumerate(out):
            nxt[k + 1] += c
            nxt[k] -= r * c
        out = nxt
    return tuple(out)


def bhat(S: SaturatedLattice, require_split: bool = True) -> BFunction:
    """Minimal polynomial of the residue of -d/dt t on the saturation modulo t.

    Over Z/p the roots are found modulo p and lifted by rational reconstruction;
    the lifted product must reproduce the modular polynomial.
    """
    K = S.lattice.K
    mp = _min_poly(S.residue, K)
    if K.modulus is None:
        coeffs = tuple(mp)
        roots = _rational_roots(coeffs)
        if roots is None and require_split:
            raise NonSplitError(f"minimal polynomial {_fmt_poly(coeffs)} does not split over Q")
        return BFunction(coeffs, roots)
    poly = nmod_poly([int(c) for c in mp], K.modulus)
    found = poly.roots()
    if sum(m for _, m in found) != poly.degree():
        raise NonSplitError("minimal polynomial does not split modulo p")
    try:
        roots = tuple(sorted(r for x, m in found for r in [K.lift(x)] * m))
    except ValueError as exc:
        raise NonSplitError(f"b-hat roots are not small rationals: {exc}") from None
    coeffs = _expand(roots)
    if [K(c) for c in coeffs] != list(mp):
        raise NonSplitError("lifted roots do not reproduce the modular minimal polynomial")
    return BFunction(coeffs, roots)


@dataclass(frozen=True)
class MonodromySpectrum:
    """Exponents alpha with eigenvalues exp(-2 pi i alpha), kept as fractions mod 1."""

    exponents: Tuple[mpq, ...]

    @property
    def fractions(self) -> Tuple[mpq, ...]:
        return tuple(sorted((-a) % 1 for a in self.exponents))

    def eigenvalue_classes(self) -> Tuple[Fraction, ...]:
        return tuple(Fraction(int(f.numerator), int(f.denominator)) for f in self.fractions)

    def levels(self) -> Tuple[int, ...]:
        return tuple(sorted({int(f.denominator) for f in self.fractions}))


def monodromy_spectrum(b: BFunction) -> MonodromySpectrum:
    if b.roots is None:
        raise NonSplitError("spectrum of a non-split b-function")
    return MonodromySpectrum(tuple(b.roots))


# -- driver ------------------------------------------------------------------------

@dataclass
class GaussManinResult:
    lattice: JetLattice
    saturated: SaturatedLattice
    bhat: BFunction
    spectrum: MonodromySpectrum
    weights: Tuple[int, ...]
    attempts: List[Tuple[int, int, str]]
    confirmed_at: Optional[int] = None


def chart_weights(s: SmoothingSpec, germ: Optional[GermSpec] = None) -> Tuple[int, ...]:
    """Truncation weights for the reduced chart: quasi-homogeneous ones when available."""
    red = s.reduced()
    cands = []
    if germ is not None and germ.gens == red.gens:
        cands.append(list(germ.generators))
    cands.append(list(red.total) + [red.function])
    for polys in cands:
        w = quasi_weights(polys)
        if w is not None:
            return w
    return (1,) * red.ambient_dim


def _low_wdeg(p: Poly, w) -> int:
    return min(_wdeg(e, w) for e in p.terms)


def initial_jet_order(s: SmoothingSpec, M: int, w: Sequence[int]) -> int:
    """Starting N: F^M must fit below the truncation with room for the fiber basis."""
    return _low_wdeg(s.reduced().function, w) * (M + 1)


def compute(s: SmoothingSpec, N: Optional[int] = None, M: Optional[int] = None,
            weights: Optional[Sequence[int]] = None, germ: Optional[GermSpec] = None,
            max_rounds: int = 12, confirm: bool = True, exact: bool = False) -> GaussManinResult:
    """Build, saturate and take b-hat, raising jet orders until the result is certified.

    The jet model certifies itself by its dimension.  With ``confirm`` the whole
    computation is repeated at N + 2 and must give the same b-hat and step count.
    Unless ``exact``, the linear algebra runs modulo large primes, and the
    confirmation run uses a different prime from the main run.
    """
    if max_rounds < 1:
        raise ValueError("max_rounds must be at least 1")
    red = s.reduced()
    mu = milnor(red.fiber())
    w = tuple(weights) if weights is not None else chart_weights(red, germ)
    if mu == 0:
        L = JetLattice(red, 1, 1, mu=0, weights=w)
        S = saturate(L)
        b = bhat(S)
        return GaussManinResult(L, S, b, monodromy_spectrum(b), w, [])
    p = pole_order(red)
    M = 2 * p + 1 if M is None else M
    N = initial_jet_order(red, M, w) if N is None else N
    fields = [QQ] if exact else [PrimeField(q) for q in PRIMES]
    pick = 0
    attempts: List[Tuple[int, int, str]] = []

    def run(n, field):
        L = JetLattice(red, n, M, mu=mu, weights=w, field=field)
        S = saturate(L)
        return L, S, bhat(S)

    for _ in range(max_rounds):
        try:
            L, S, b = run(N, fields[pick % len(fields)])
        except RankMismatchError as exc:
            attempts.append((N, M, str(exc)))
            N += 2 * max(w)
            continue
        except PrecisionError as exc:
            attempts.append((N, M, str(exc)))
            M += 2
            N += _low_wdeg(red.function, w) * 2
            continue
        except BadPrimeError as exc:
            attempts.append((N, M, str(exc)))
            pick += 1
            continue
        res = GaussManinResult(L, S, b, monodromy_spectrum(b), w, attempts)
        if not confirm:
            return res
        try:
            _, S2, b2 = run(N + 2, fields[(pick + 1) % len(fields)])
        except (RankMismatchError, PrecisionError, BadPrimeError) as exc:
            attempts.append((N + 2, M, f"confirmation failed: {exc}"))
            N += 2
            continue
        if b2.coeffs == b.coeffs and S2.steps == S.steps:
            res.confirmed_at = N + 2
            return res
        attempts.append((N + 2, M, "b-hat changed under N -> N+2"))
        N += 2
    raise SaturationError(f"no certified result within {max_rounds} attempt(s): {attempts[-1][2]}")

"""Exact multivariate polynomials over Q and polynomial differential forms.

A :class:`Poly` is an immutable sparse map from exponent tuples to nonzero
rationals (``gmpy2.mpq``).  Every polynomial carries the tuple of variable
names it lives over; arithmetic between different variable sets raises.

A :class:`DiffForm` is a sparse sum ``sum a_I dz_I`` over strictly increasing
index tuples ``I`` (0-based).
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple

from gmpy2 import mpq

Exps = Tuple[int, ...]

INF_ORDER = None  # truncate(p, INF_ORDER) is the identity


def to_q(c) -> mpq:
    """Coerce an int, Fraction, mpq or 'p/q' string to ``mpq``."""
    if isinstance(c, Fraction):
        return mpq(c.numerator, c.denominator)
    if isinstance(c, float):
        raise TypeError("floating point coefficients are not allowed")
    return mpq(c)


def q_str(c) -> str:
    """Exact textual form of a rational: 'p' or 'p/q'."""
    c = mpq(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


class Monomial(tuple):
    """Exponent vector of a monomial z_1^a_1 ... z_d^a_d."""

    def __new__(cls, exps: Iterable[int]):
        exps = tuple(int(e) for e in exps)
        if any(e < 0 for e in exps):
            raise ValueError(f"negative exponent in {exps}")
        return super().__new__(cls, exps)

    @property
    def degree(self) -> int:
        return sum(self)

    def divides(self, other: Sequence[int]) -> bool:
        return all(a <= b for a, b in zip(self, other))


def grevlex_key(e: Exps):
    """Sort key; larger key means larger in graded reverse lexicographic order."""
    return (sum(e), tuple(-x for x in reversed(e)))


class Poly:
    """Immutable polynomial with exact rational coefficients."""

    __slots__ = ("gens", "terms", "_hash")

    def __init__(self, gens: Sequence[str], terms: Mapping[Exps, object] | None = None,
                 _clean: bool = False):
        self.gens = tuple(gens)
        if terms is None:
            self.terms: Dict[Exps, mpq] = {}
        elif _clean:
            self.terms = dict(terms)
        else:
            d = len(self.gens)
            out = {}
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != d:
                    raise ValueError(f"exponent {e} does not match {d} variables")
                c = to_q(c)
                if c:
                    out[e] = out.get(e, mpq(0)) + c
                    if not out[e]:
                        del out[e]
            self.terms = out
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def zero(cls, gens) -> "Poly":
        return cls(gens, {}, _clean=True)

    @classmethod
    def const(cls, gens, c) -> "Poly":
        c = to_q(c)
        gens = tuple(gens)
        return cls(gens, {(0,) * len(gens): c} if c else {}, _clean=True)

    @classmethod
    def var(cls, gens, i: int) -> "Poly":
        gens = tuple(gens)
        e = [0] * len(gens)
        e[i] = 1
        return cls(gens, {tuple(e): mpq(1)}, _clean=True)

    @classmethod
    def monomial(cls, gens, exps: Sequence[int], c=1) -> "Poly":
        return cls(gens, {tuple(exps): c})

    @classmethod
    def vars(cls, gens) -> List["Poly"]:
        return [cls.var(gens, i) for i in range(len(tuple(gens)))]

    # basic queries -------------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.gens)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def low_degree(self) -> int:
        """Order of vanishing at the origin; -1 for zero."""
        return min((sum(e) for e in self.terms), default=-1)

    def constant_term(self) -> mpq:
        return self.terms.get((0,) * self.nvars, mpq(0))

    def sorted_terms(self) -> List[Tuple[Exps, mpq]]:
        return sorted(self.terms.items(), key=lambda kv: grevlex_key(kv[0]), reverse=True)

    def __iter__(self) -> Iterator[Tuple[Exps, mpq]]:
        return iter(self.sorted_terms())

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.gens == other.gens and self.terms == other.terms
        if isinstance(other, (int, Fraction)) or type(other) is type(mpq(0)):
            return self.terms == Poly.const(self.gens, other).terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.gens, frozenset(self.terms.items())))
        return self._hash

    # arithmetic ----------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.gens != self.gens:
                raise ValueError(f"variable sets differ: {self.gens} vs {other.gens}")
            return other
        return Poly.const(self.gens, other)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Poly(self.gens, out, _clean=True)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.gens, {e: -c for e, c in self.terms.items()}, _clean=True)

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = to_q(other)
            if not c:
                return Poly.zero(self.gens)
            return Poly(self.gens, {e: v * c for e, v in self.terms.items()}, _clean=True)
        other = self._coerce(other)
        out: Dict[Exps, mpq] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return Poly(self.gens, {e: c for e, c in out.items() if c}, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.const(self.gens, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_term(self, exps: Exps, c) -> "Poly":
        """Multiply by the single term c*z^exps."""
        c = to_q(c)
        if not c:
            return Poly.zero(self.gens)
        return Poly(self.gens, {tuple(a + b for a, b in zip(e, exps)): v * c
                                for e, v in self.terms.items()}, _clean=True)

    def partial(self, i: int) -> "Poly":
        """Formal derivative with respect to the i-th variable (0-based)."""
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range for {self.nvars} variables")
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                e2 = e[:i] + (k - 1,) + e[i + 1:]
                out[e2] = c * k
        return Poly(self.gens, out, _clean=True)

    def truncate(self, n: int | None) -> "Poly":
        """Drop all terms of total degree > n (n=None keeps everything)."""
        if n is None:
            return self
        if n < 0:
            raise ValueError("truncation order must be nonnegative")
        return Poly(self.gens, {e: c for e, c in self.terms.items() if sum(e) <= n},
                    _clean=True)

    def subs(self, i: int, value: "Poly") -> "Poly":
        """Substitute variable i by ``value`` (same variable set)."""
        value = self._coerce(value)
        powers = [Poly.const(self.gens, 1)]
        out = Poly.zero(self.gens)
        for e, c in self.terms.items():
            k = e[i]
            while len(powers) <= k:
                powers.append(powers[-1] * value)
            rest = e[:i] + (0,) + e[i + 1:]
            out = out + powers[k].mul_term(rest, c)
        return out

    def drop_var(self, i: int) -> "Poly":
        """Remove variable i, which must not occur."""
        gens = self.gens[:i] + self.gens[i + 1:]
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                raise ValueError(f"variable {self.gens[i]} still occurs")
            out[e[:i] + e[i + 1:]] = c
        return Poly(gens, out, _clean=True)

    def rename(self, gens: Sequence[str]) -> "Poly":
        gens = tuple(gens)
        if len(gens) != self.nvars:
            raise ValueError("renaming must keep the number of variables")
        return Poly(gens, self.terms, _clean=True)

    def embed(self, gens: Sequence[str]) -> "Poly":
        """View this polynomial in a larger variable set containing its own."""
        gens = tuple(gens)
        pos = [gens.index(g) for g in self.gens]
        out = {}
        for e, c in self.terms.items():
            e2 = [0] * len(gens)
            for j, k in zip(pos, e):
                e2[j] = k
            out[tuple(e2)] = c
        return Poly(gens, out, _clean=True)

    def linear_change(self, matrix: Sequence[Sequence[object]]) -> "Poly":
        """Substitute z_i -> sum_j matrix[i][j] z_j simultaneously."""
        xs = Poly.vars(self.gens)
        images = [sum((xs[j] * to_q(a) for j, a in enumerate(row) if to_q(a)),
                      Poly.zero(self.gens)) for row in matrix]
        out = Poly.zero(self.gens)
        for e, c in self.terms.items():
            term = Poly.const(self.gens, c)
            for i, k in enumerate(e):
                if k:
                    term = term * images[i] ** k
            out = out + term
        return out

    # printing ------------------------------------------------------------
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for e, c in self.sorted_terms():
            mono = "*".join(g if k == 1 else f"{g}^{k}" for g, k in zip(self.gens, e) if k)
            mag = abs(c)
            sign = "-" if c < 0 else "+"
            if not mono:
                body = q_str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{q_str(mag)}*{mono}"
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"Poly({str(self)!r}, gens={self.gens})"


def arith(a: Poly, b: Poly, op: str) -> Poly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def partial(p: Poly, i: int) -> Poly:
    return p.partial(i)


def truncate(p: Poly, n: int | None) -> Poly:
    return p.truncate(n)


# ---------------------------------------------------------------------------
# matrices


class PolyMatrix:
    """Rectangular matrix of polynomials over one variable set."""

    def __init__(self, rows: Sequence[Sequence[Poly]]):
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise ValueError("a PolyMatrix needs at least one row and one column")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("rows of different length")
        self.rows = rows

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    def __getitem__(self, ij) -> Poly:
        i, j = ij
        return self.rows[i][j]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix([[self.rows[i][j] for j in cols] for i in rows])

    def det(self) -> Poly:
        n, m = self.shape
        if n != m:
            raise ValueError("determinant of a non-square matrix")
        return _det(self.rows, tuple(range(n)), 0, {})

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyMatrix) and self.rows == other.rows

    def __repr__(self) -> str:
        return "PolyMatrix([" + ", ".join("[" + ", ".join(str(p) for p in r) + "]"
                                         for r in self.rows) + "])"


def _det(rows, cols: Tuple[int, ...], r: int, memo) -> Poly:
    # Laplace expansion along row r over the remaining columns, memoized.
    if not cols:
        return Poly.const(rows[0][0].gens, 1)
    if cols in memo:
        return memo[cols]
    total = Poly.zero(rows[0][0].gens)
    for k, c in enumerate(cols):
        entry = rows[r][c]
        if entry:
            sub = _det(rows, cols[:k] + cols[k + 1:], r + 1, memo)
            term = entry * sub
            total = total - term if k % 2 else total + term
    memo[cols] = total
    return total


def jacobian(fs: Sequence[Poly]) -> PolyMatrix:
    fs = list(fs)
    if not fs:
        raise ValueError("jacobian of an empty sequence")
    d = fs[0].nvars
    if d == 0:
        raise ValueError("jacobian over an empty variable set")
    return PolyMatrix([[f.partial(j) for j in range(d)] for f in fs])


def minors(m: PolyMatrix, k: int) -> List[Poly]:
    """All k x k minors, ordered lexicographically by (row set, column set)."""
    n, c = m.shape
    if k < 0 or k > min(n, c):
        raise ValueError(f"no {k}x{k} minors in a {n}x{c} matrix")
    out = []
    for rs in combinations(range(n), k):
        for cs in combinations(range(c), k):
            out.append(m.submatrix(rs, cs).det() if k else Poly.const(m[0, 0].gens, 1))
    return out


# ---------------------------------------------------------------------------
# differential forms


def _merge_sign(a: Tuple[int, ...], b: Tuple[int, ...]):
    """Sign and sorted union of dz_a ^ dz_b, or (0, None) if they share an index."""
    if set(a) & set(b):
        return 0, None
    inversions = sum(1 for x in a for y in b if x > y)
    return (-1 if inversions % 2 else 1), tuple(sorted(a + b))


class DiffForm:
    """A polynomial p-form sum_I a_I dz_I with I strictly increasing."""

    __slots__ = ("gens", "degree", "components")

    def __init__(self, gens: Sequence[str], degree: int,
                 components: Mapping[Tuple[int, ...], Poly] | None = None):
        self.gens = tuple(gens)
        self.degree = degree
        d = len(self.gens)
        comps = {}
        for idx, a in (components or {}).items():
            idx = tuple(idx)
            if len(idx) != degree or any(not 0 <= i < d for i in idx) or \
                    any(x >= y for x, y in zip(idx, idx[1:])):
                raise ValueError(f"bad index tuple {idx} for a {degree}-form in {d} variables")
            if a.gens != self.gens:
                raise ValueError("coefficient over a different variable set")
            if a:
                comps[idx] = a
        self.components: Dict[Tuple[int, ...], Poly] = comps

    @classmethod
    def zero(cls, gens, degree: int) -> "DiffForm":
        return cls(gens, degree, {})

    @classmethod
    def function(cls, f: Poly) -> "DiffForm":
        return cls(f.gens, 0, {(): f})

    @classmethod
    def dz(cls, gens, *idx: int, coeff: Poly | None = None) -> "DiffForm":
        """The form coeff * dz_{i1} ^ ... ^ dz_{ip} (indices in any order)."""
        gens = tuple(gens)
        coeff = coeff if coeff is not None else Poly.const(gens, 1)
        if len(set(idx)) < len(idx):
            return cls.zero(gens, len(idx))
        order = sorted(range(len(idx)), key=lambda k: idx[k])
        inv = sum(1 for i in range(len(order)) for j in range(i + 1, len(order))
                  if order[i] > order[j])
        sign = -1 if inv % 2 else 1
        return cls(gens, len(idx), {tuple(sorted(idx)): coeff * sign})

    def is_zero(self) -> bool:
        return not self.components

    def __eq__(self, other) -> bool:
        return (isinstance(other, DiffForm) and self.gens == other.gens
                and self.degree == other.degree and self.components == other.components)

    def __add__(self, other: "DiffForm") -> "DiffForm":
        if self.gens != other.gens or self.degree != other.degree:
            raise ValueError("adding forms of different degree or ambient space")
        out = dict(self.components)
        for idx, a in other.components.items():
            out[idx] = out[idx] + a if idx in out else a
        return DiffForm(self.gens, self.degree, out)

    def __neg__(self) -> "DiffForm":
        return DiffForm(self.gens, self.degree, {i: -a for i, a in self.components.items()})

    def __sub__(self, other: "DiffForm") -> "DiffForm":
        return self + (-other)

    def scale(self, f) -> "DiffForm":
        """Multiply every coefficient by a function (Poly or rational)."""
        return DiffForm(self.gens, self.degree, {i: a * f for i, a in self.components.items()})

    def top_coeff(self) -> Poly:
        """Coefficient of dz_1 ^ ... ^ dz_d of a top-degree form."""
        d = len(self.gens)
        if self.degree != d:
            raise ValueError(f"top_coeff of a {self.degree}-form in {d} variables")
        return self.components.get(tuple(range(d)), Poly.zero(self.gens))

    def __repr__(self) -> str:
        if not self.components:
            return f"DiffForm(0, degree={self.degree})"
        parts = []
        for idx in sorted(self.components):
            w = "^".join(f"d{self.gens[i]}" for i in idx) or "1"
            parts.append(f"({self.components[idx]})*{w}")
        return "DiffForm(" + " + ".join(parts) + ")"


def wedge(w: DiffForm, e: DiffForm) -> DiffForm:
    if w.gens != e.gens:
        raise ValueError("wedge of forms over different ambient spaces")
    out: Dict[Tuple[int, ...], Poly] = {}
    for i1, a in w.components.items():
        for i2, b in e.components.items():
            sign, idx = _merge_sign(i1, i2)
            if not sign:
                continue
            term = a * b if sign > 0 else -(a * b)
            out[idx] = out[idx] + term if idx in out else term
    return DiffForm(w.gens, w.degree + e.degree, out)


def ext_d(w: DiffForm) -> DiffForm:
    """Exterior derivative."""
    out: Dict[Tuple[int, ...], Poly] = {}
    for idx, a in w.components.items():
        for j in range(len(w.gens)):
            if j in idx:
                continue
            da = a.partial(j)
            if not da:
                continue
            sign, new = _merge_sign((j,), idx)
            term = da if sign > 0 else -da
            out[new] = out[new] + term if new in out else term
    return DiffForm(w.gens, w.degree + 1, out)


def d_function(f: Poly) -> DiffForm:
    return ext_d(DiffForm.function(f))


def wedge_all(forms: Sequence[DiffForm], gens=None) -> DiffForm:
    """Wedge a sequence of forms; the empty wedge is the constant 0-form 1."""
    if not forms:
        return DiffForm.function(Poly.const(gens, 1))
    out = forms[0]
    for f in forms[1:]:
        out = wedge(out, f)
    return out

import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from icis.localalg import (INFINITE, Ideal, LocalOrder, contains, kbase, krull_dim, mora_nf,
                           std_basis, std_basis_module, vdim)
from icis.polyforms import Monomial, Poly, jacobian, minors

from conftest import P, XYZ

XY = ("x", "y")
x, y = Poly.vars(XY)


def Q(s):
    return P(s, XY)


def test_mora_nf_examples():
    one = Poly.const(XY, 1)
    assert mora_nf(x ** 2, std_basis([x])).is_zero()
    assert mora_nf(one, std_basis([x, y])) == one
    r = mora_nf(x + x ** 2, std_basis([y]))
    assert not r.is_zero()
    # up to a unit, which here must leave the initial term x
    assert r.low_degree() == 1


def test_std_basis_examples():
    B = std_basis([x ** 2, x + y ** 3])
    assert vdim(B) == 6
    assert std_basis([1 + x]).is_unit()
    assert vdim(std_basis([1 + x])) == 0
    zero = std_basis(Ideal.of([], nvars=2))
    assert zero.elements == [] and vdim(zero) is INFINITE


def test_vdim_examples():
    X, Y, Z = Poly.vars(XYZ)
    assert vdim(std_basis([X, Y, Z])) == 1
    assert vdim(std_basis([x ** 2, y ** 3])) == 6
    assert vdim(std_basis([2 * x, 3 * y ** 2])) == 2
    assert vdim(std_basis([x * y])) is INFINITE


def test_kbase_examples():
    assert kbase(std_basis([x, y])) == [Monomial((0, 0))]
    assert kbase(std_basis([x ** 2, y ** 2])) == [Monomial(m) for m in
                                                   [(0, 0), (1, 0), (0, 1), (1, 1)]]
    assert kbase(std_basis([2 * x, 3 * y ** 2])) == [Monomial((0, 0)), Monomial((0, 1))]
    with pytest.raises(ValueError):
        kbase(std_basis([x * y]))


def test_local_not_global():
    # x - x^2 = x(1 - x) generates the maximal ideal in the local ring
    assert vdim(std_basis([x - x ** 2, y])) == 1
    # a unit times x^2 + y^3 stays of colength 6 with x
    assert vdim(std_basis([(1 + y) * x, x ** 2 + y ** 3])) == 3


def test_local_order_axiom():
    o = LocalOrder(3)
    one = (0, 0, 0)
    for i in range(3):
        e = [0, 0, 0]
        e[i] = 1
        assert o.key(one) > o.key(e)
    with pytest.raises(ValueError):
        LocalOrder(2, (0, 0))


def test_krull_dim():
    assert krull_dim(std_basis([x * y])) == 1
    assert krull_dim(std_basis([x, y])) == 0
    assert krull_dim(std_basis([1 + x])) == -1


def test_module_basis():
    # O^2 / (x e1, y e1, x e2, y^2 e2) has dimension 1 + 2
    zero = Poly.zero(XY)
    B = std_basis_module([(x, zero), (y, zero), (zero, x), (zero, y ** 2)], 2)
    assert vdim(B) == 3
    assert len(kbase(B)) == 3
    assert contains(B, (x * y, y ** 3))
    assert not contains(B, (zero, y))
    with pytest.raises(ValueError):
        std_basis_module([(x,)], 2)


# -- properties ---------------------------------------------------------------

IDEALS = [
    [x ** 2, x + y ** 3],
    [x ** 2 + y ** 3, x * y],
    [Q("x^3 + x*y^2"), Q("y^4 - x^2")],
    [Q("x*y + y^3"), Q("x^2 - y^2 + x^3")],
]


def _random_poly(rng, gens, deg=3):
    terms = {}
    for e in product(range(deg + 1), repeat=len(gens)):
        if sum(e) <= deg and rng.random() < 0.4:
            terms[e] = rng.randint(-4, 4)
    return Poly(gens, terms)


@pytest.mark.parametrize("gens", IDEALS)
def test_random_member_reduces_to_zero(gens):
    rng = random.Random(11)
    B = std_basis(gens)
    for _ in range(5):
        p = sum((_random_poly(rng, XY) * g for g in gens), Poly.zero(XY))
        assert mora_nf(p, B).is_zero()


@pytest.mark.parametrize("gens", IDEALS)
def test_vdim_invariant_under_permutation_and_units(gens):
    base = vdim(std_basis(gens))
    assert vdim(std_basis(list(reversed(gens)))) == base
    rng = random.Random(5)
    for _ in range(5):
        twisted = [g * (Poly.const(XY, 1) + x * rng.randint(-3, 3) + y * y * rng.randint(-3, 3))
                   for g in gens]
        assert vdim(std_basis(twisted)) == base
    assert len(kbase(std_basis(gens))) == base


def _brute_force_colength(monos, nvars):
    bound = max(max(m) for m in monos) + 1
    count = 0
    for e in product(range(bound * 2), repeat=nvars):
        if not any(all(a <= b for a, b in zip(m, e)) for m in monos):
            count += 1
    return count


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.tuples(*[st.integers(0, 4)] * n), min_size=1, max_size=4))))
def test_monomial_ideal_colength(data):
    n, extra = data
    gens = tuple(f"v{i}" for i in range(n))
    # pure powers keep the quotient finite
    pure = []
    for i in range(n):
        e = [0] * n
        e[i] = 1 + (i + len(extra)) % 4
        pure.append(tuple(e))
    monos = [m for m in extra if sum(m) <= 4 and sum(m) > 0] + pure
    B = std_basis([Poly.monomial(gens, m) for m in monos])
    assert vdim(B) == _brute_force_colength(monos, n)
    assert len(kbase(B)) == vdim(B)


def test_minor_ideal_invariant_under_permuting_functions():
    f = [P("z^2 - x*y"), P("x^2 + y^2 + z^2")]
    a = std_basis(f[:1] + minors(jacobian(f), 2))
    b = std_basis(f[:1] + minors(jacobian(f[::-1]), 2))
    assert all(contains(b, g) for g in a.elements)
    assert all(contains(a, g) for g in b.elements)
    assert vdim(a) == vdim(b) == 6


def _graded_colength(gens, nvars):
    """sum_d (dim S_d - dim I_d) for a homogeneous ideal, by rank computations."""
    from sympy import Matrix
    total, d = 0, 0
    degs = [g.degree() for g in gens]
    while True:
        monos = [e for e in product(range(d + 1), repeat=nvars) if sum(e) == d]
        rows = []
        for g, dg in zip(gens, degs):
            if dg > d:
                continue
            for a in product(range(d - dg + 1), repeat=nvars):
                if sum(a) == d - dg:
                    h = g * Poly.monomial(g.gens, a)
                    rows.append([h.terms.get(m, 0) for m in monos])
        rank = Matrix(rows).rank() if rows else 0
        if rank == len(monos):
            return total
        total += len(monos) - rank
        d += 1


@settings(max_examples=25, deadline=None)
@given(st.lists(st.lists(st.integers(-6, 6), min_size=6, max_size=6), min_size=3, max_size=4))
def test_vdim_matches_graded_oracle_for_quadrics(coeffs):
    X, Y, Z = Poly.vars(XYZ)
    quad = [X * X, X * Y, Y * Y, X * Z, Y * Z, Z * Z]
    gens = [sum((q * c for q, c in zip(quad, row)), Poly.zero(XYZ)) for row in coeffs]
    gens = [g for g in gens if g]
    B = std_basis(Ideal.of(gens, 3))
    v = vdim(B)
    if v is INFINITE:
        return
    assert v == _graded_colength(gens, 3)
    assert len(kbase(B)) == v
    assert all(mora_nf(g, B).is_zero() for g in gens)


def test_unit_ideal_elements():
    B = std_basis([1 + x, y])
    assert B.is_unit() and B.elements == [Poly.const(XY, 1)]
    assert contains(B, x + 7)

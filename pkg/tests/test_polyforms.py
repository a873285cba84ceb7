import pytest
from hypothesis import given, settings, strategies as st
from gmpy2 import mpq

from icis.polyforms import (DiffForm, Monomial, Poly, arith, d_function, ext_d, jacobian,
                            minors, partial, truncate, wedge)

from conftest import P, XYZ

X, Y, Z = Poly.vars(XYZ)


def test_arith_examples():
    assert arith(X + Y, X - Y, "mul") == P("x^2 - y^2")
    p = P("z^2 - x*y")
    assert arith(p, Poly.zero(XYZ), "add") == p
    assert arith(p, Poly.const(XYZ, 1), "mul") == p
    with pytest.raises(ValueError):
        arith(p, p, "div")


def test_no_zero_coefficients_stored():
    p = (X + Y) - Y
    assert p == X
    assert all(c != 0 for _, c in p)
    assert not (X - X).terms


def test_mismatched_variables():
    other = Poly.var(("a", "b"), 0)
    with pytest.raises(ValueError):
        X + other


def test_float_coefficients_rejected():
    with pytest.raises(TypeError):
        Poly.const(XYZ, 0.5)


def test_partial():
    assert partial(P("z^2 - x*y"), 2) == 2 * Z
    assert partial(P("x^2 + y^2 + z^2"), 0) == 2 * X
    assert partial(Poly.const(XYZ, 7), 0).is_zero()
    with pytest.raises(IndexError):
        partial(X, 3)


def test_jacobian():
    J = jacobian([P("z^2 - x*y"), P("x^2 + y^2 + z^2")])
    assert J.shape == (2, 3)
    expect = [[-Y, -X, 2 * Z], [2 * X, 2 * Y, 2 * Z]]
    assert all(J[i, j] == expect[i][j] for i in range(2) for j in range(3))
    J1 = jacobian([parse_xy("x^2 + y^3")])
    assert J1[0, 0] == parse_xy("2*x") and J1[0, 1] == parse_xy("3*y^2")
    with pytest.raises(ValueError):
        jacobian([Poly.zero(())])


def parse_xy(s):
    return P(s, ("x", "y"))


def test_minors():
    J = jacobian([P("z^2 - x*y"), P("x^2 + y^2 + z^2")])
    # expanded by hand
    assert minors(J, 2) == [P("2*x^2 - 2*y^2"), P("-2*y*z - 4*x*z"), P("-2*x*z - 4*y*z")]
    a, b = Poly.vars(("a", "b"))
    from icis.polyforms import PolyMatrix
    assert minors(PolyMatrix([[a, b]]), 1) == [a, b]
    sq = PolyMatrix([[a, b], [b, a]])
    assert minors(sq, 2) == [a * a - b * b]
    with pytest.raises(ValueError):
        minors(sq, 3)


def test_wedge_examples():
    dx, dy = DiffForm.dz(XYZ, 0), DiffForm.dz(XYZ, 1)
    assert wedge(dx, dy) == -wedge(dy, dx)
    assert wedge(dx, dx).is_zero()
    assert wedge(dx.scale(X), dy.scale(Y)) == DiffForm.dz(XYZ, 0, 1, coeff=X * Y)
    with pytest.raises(ValueError):
        wedge(dx, DiffForm.dz(("a",), 0))


def test_ext_d_examples():
    assert ext_d(DiffForm.dz(XYZ, 1, coeff=X)) == DiffForm.dz(XYZ, 0, 1)
    assert ext_d(DiffForm.dz(XYZ, 0, 1, coeff=Poly.const(XYZ, 5))).is_zero()
    xy = ("x", "y")
    x, y = Poly.vars(xy)
    w = DiffForm.dz(xy, 1, coeff=x) - DiffForm.dz(xy, 0, coeff=y)
    assert ext_d(w) == DiffForm.dz(xy, 0, 1, coeff=Poly.const(xy, 2))


def test_truncate():
    x = Poly.var(("x",), 0)
    assert truncate(x + x ** 3, 2) == x
    assert truncate(x + x ** 3, None) == x + x ** 3
    assert truncate(1 + x, 0) == Poly.const(("x",), 1)


def test_monomial():
    m = Monomial([2, 0, 1])
    assert m.degree == 3 and Monomial([1, 0, 1]).divides(m)
    with pytest.raises(ValueError):
        Monomial([1, -1])


def test_printing_is_grevlex_descending():
    p = P("1 + x + z^2 + x*y - 1/2*y^3")
    assert str(p) == "-1/2*y^3 + x*y + z^2 + x + 1"


# -- properties over random forms ------------------------------------------

coeff = st.integers(-3, 3)
expo = st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))
polys = st.dictionaries(expo, coeff, max_size=4).map(lambda t: Poly(XYZ, t))


@st.composite
def forms(draw, degree=None):
    p = draw(st.integers(0, 3)) if degree is None else degree
    from itertools import combinations
    comps = {idx: draw(polys) for idx in combinations(range(3), p)}
    return DiffForm(XYZ, p, comps)


@settings(max_examples=60, deadline=None)
@given(forms())
def test_d_squared_is_zero(w):
    assert ext_d(ext_d(w)).is_zero()


@settings(max_examples=60, deadline=None)
@given(forms(), forms())
def test_graded_anticommutative(w, e):
    sign = -1 if (w.degree * e.degree) % 2 else 1
    lhs = wedge(w, e)
    rhs = wedge(e, w)
    assert lhs == (rhs if sign > 0 else -rhs)


@settings(max_examples=60, deadline=None)
@given(forms(), forms())
def test_leibniz(w, e):
    lhs = ext_d(wedge(w, e))
    second = wedge(w, ext_d(e))
    rhs = wedge(ext_d(w), e) + (second if w.degree % 2 == 0 else -second)
    assert lhs == rhs


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a


@settings(max_examples=40, deadline=None)
@given(polys, polys)
def test_d_of_product(f, g):
    assert d_function(f * g) == d_function(f).scale(g) + d_function(g).scale(f)


def test_exact_rationals():
    h = Poly.const(XYZ, mpq(1, 3))
    assert (h * 3) == Poly.const(XYZ, 1)

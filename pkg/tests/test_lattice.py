from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dalat.basis import basis_table, e_lambda_table
from dalat.lattice import (LatticeFunction, LatticePoint, PathError, PathSpec, Window,
                           WindowError, apply_difference, discrete_integral,
                           integral_from_origin, is_discrete_analytic, staircase)
from dalat.scalar import ALPHA_MINUS, ALPHA_PLUS, GR

W = Window(0, 5, -3, 3)


def ident(window=W):
    return LatticeFunction.tabulate(lambda p: p.scalar(), window, exact=True)


def test_point_parsing():
    assert LatticePoint.parse("2+3i") == LatticePoint(2, 3)
    assert LatticePoint.parse("2,-3") == LatticePoint(2, -3)
    assert LatticePoint.parse("-i") == LatticePoint(0, -1)
    with pytest.raises(ValueError):
        LatticePoint.parse("1/2")


def test_window_must_sit_in_half_lattice():
    with pytest.raises(WindowError):
        LatticeFunction.constant([[1]], Window(-1, 2, 0, 0))


def test_dx_of_second_basis_polynomial():
    f = basis_table(2, W)
    assert apply_difference("dx", f).equals(basis_table(1, Window(0, 4, -3, 3)))


def test_dbar_of_constant_vanishes():
    f = LatticeFunction.constant([[GR(7, -2)]], W)
    assert not any(apply_difference("dbar", f).values.flat)


def test_derivative_of_identity():
    d = apply_difference("derivative", ident())
    for z in [(0, 0), (2, 1), (4, -3)]:
        assert d.scalar_at(z) == GR(Fraction(1, 2), Fraction(-1, 2))
    # the same value as -(i/2) D z
    D = apply_difference("d", ident())
    assert D.scalar_at((1, 1)) * GR(0, Fraction(-1, 2)) == d.scalar_at((1, 1))


def test_analyticity_examples():
    for n in range(11):
        assert is_discrete_analytic(basis_table(n, W)) == (True, 0.0)
    ok, res = is_discrete_analytic(LatticeFunction.tabulate(lambda p: p.x, W, exact=True))
    assert not ok and res > 0
    ok, res = is_discrete_analytic(e_lambda_table(0.5, W), tol=1e-12)
    assert ok and res <= 1e-12


def test_analyticity_needs_a_cell():
    with pytest.raises(WindowError):
        is_discrete_analytic(LatticeFunction.constant([[1]], Window(0, 0, 0, 3)))


def test_integral_examples():
    one = LatticeFunction.constant([[1]], W)
    assert discrete_integral(one, PathSpec.parse("0;1"))[0, 0] == GR(1)
    assert discrete_integral(ident(), PathSpec.parse("0;1"))[0, 0] == GR(Fraction(1, 2))
    assert integral_from_origin(one, (2, 0))[0, 0] == GR(2)
    assert integral_from_origin(one, (0, 1))[0, 0] == GR(0, 1)
    a = integral_from_origin(ident(), (1, 1), "xy")
    b = integral_from_origin(ident(), (1, 1), "yx")
    assert (a - b)[0, 0] == GR(0)


def test_path_errors():
    with pytest.raises(PathError):
        PathSpec.parse("0;2")
    with pytest.raises(PathError):
        discrete_integral(ident(), PathSpec.parse("5;6"))


def test_staircase_order():
    assert [str(p) for p in staircase((1, 1), "yx").vertices] == ["0", "0+1i", "1+1i"]


def test_json_roundtrip():
    f = basis_table(3, Window(0, 2, -1, 1))
    assert LatticeFunction.from_json(f.to_json()).equals(f)
    g = e_lambda_table(0.25, Window(0, 2, -1, 1))
    assert LatticeFunction.from_json(g.to_json()).max_abs_diff(g) == 0


coeffs = st.lists(st.builds(GR, st.integers(-5, 5), st.integers(-5, 5)), min_size=25, max_size=25)


def _random(values):
    it = iter(values)
    return LatticeFunction.tabulate(lambda p: next(it), Window(0, 4, -2, 2), exact=True)


@settings(max_examples=40, deadline=None)
@given(coeffs)
def test_difference_operators_commute(values):
    f = _random(values)
    assert apply_difference("dy", apply_difference("dx", f)).equals(
        apply_difference("dx", apply_difference("dy", f)))
    assert apply_difference("d", apply_difference("dbar", f)).equals(
        apply_difference("dbar", apply_difference("d", f)))


@settings(max_examples=40, deadline=None)
@given(coeffs)
def test_dbar_factorization(values):
    f = _random(values)
    g = f.restrict(Window(0, 4, -2, 1)) + apply_difference("dy", f).scale(ALPHA_PLUS)
    lhs = g.restrict(Window(0, 3, -2, 1)) + apply_difference("dx", g).scale(ALPHA_MINUS)
    assert lhs.equals(f.restrict(Window(0, 3, -2, 1)) + apply_difference("dbar", f))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 6), st.integers(0, 3), st.integers(-2, 2), st.integers(1, 2), st.integers(1, 2))
def test_closed_rectangles_integrate_to_zero(n, x, y, w, h):
    f = basis_table(n, Window(0, 6, -3, 5))
    pts = ([LatticePoint(x + k, y) for k in range(w)] + [LatticePoint(x + w, y + k) for k in range(h)]
           + [LatticePoint(x + w - k, y + h) for k in range(w)]
           + [LatticePoint(x, y + h - k) for k in range(h + 1)])
    loop = PathSpec(pts)
    assert loop.closed
    assert discrete_integral(f, loop)[0, 0] == GR(0)

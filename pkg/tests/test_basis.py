import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dalat.basis import (CoefficientSeries, SeriesDivergenceWarning, basis_csv, basis_poly,
                         basis_row, basis_table, convolve, e_lambda, e_lambda_table, e_minus_one,
                         h2_norm, h2_norm_squared, mu_to_lambda, series_eval, series_table,
                         taylor_coefficients, z_apply)
from dalat.lattice import LatticeFunction, LatticePoint, Window, apply_difference
from dalat.scalar import ALPHA_MINUS, ALPHA_PLUS, GR

W = Window(0, 5, -3, 3)


def coefficient_oracle(n, z):
    """Coefficient of lam^n in (1+lam)^x (1+a+ lam)^y (1+a- lam)^(-y), by naive series algebra."""
    def mul(a, b):
        out = [GR(0)] * (n + 1)
        for i, u in enumerate(a):
            for j, v in enumerate(b):
                if i + j <= n:
                    out[i + j] = out[i + j] + u * v
        return out

    def geometric(c, power):
        # (1 + c lam)^(-power) by repeated multiplication with sum (-c lam)^k
        inv = [(-c) ** k for k in range(n + 1)]
        out = [GR(1)] + [GR(0)] * n
        for _ in range(power):
            out = mul(out, inv)
        return out

    out = [GR(1)] + [GR(0)] * n
    for _ in range(z.x):
        out = mul(out, [GR(1), GR(1)])
    up, down = (ALPHA_PLUS, ALPHA_MINUS) if z.y >= 0 else (ALPHA_MINUS, ALPHA_PLUS)
    for _ in range(abs(z.y)):
        out = mul(out, [GR(1), up])
    out = mul(out, geometric(down, abs(z.y)))
    return out[n]


def test_basis_examples():
    assert basis_poly(0, (4, -2)) == GR(1)
    assert basis_poly(2, (3, 0)) == GR(3)
    assert basis_poly(2, (1, 1)) == GR(Fraction(-1, 2), Fraction(1, 2))


@pytest.mark.parametrize("z", [(0, 0), (1, 1), (2, -3), (0, 4), (5, 2)])
def test_basis_matches_naive_series(z):
    z = LatticePoint(*z)
    row = basis_row(z, 9)
    for n in range(10):
        assert row[n] == coefficient_oracle(n, z)


def test_float_row_matches_exact():
    for z in [(3, 4), (2, -5), (0, 7)]:
        exact = np.array([complex(v) for v in basis_row(z, 60)])
        assert np.allclose(basis_row(z, 60, exact=False), exact, rtol=1e-12, atol=1e-300)


def test_e_lambda_examples():
    assert e_lambda(GR(0), (3, -2)) == GR(1)
    lam = GR(Fraction(2, 3), 1)
    assert e_lambda(lam, (1, 0)) == 1 + lam
    assert e_lambda(GR(1), (0, 1)) == GR(Fraction(4, 5), Fraction(3, 5))
    with pytest.raises(ValueError):
        e_lambda(GR(-1, -1), (1, 1))


def test_mu_to_lambda_examples():
    assert mu_to_lambda(GR(0)) == GR(0)
    assert mu_to_lambda(GR(0, 1)) == GR(1, -1)
    mu = GR(Fraction(1, 3), Fraction(-1, 2))
    f = e_lambda_table(mu_to_lambda(mu), W)
    dy = apply_difference("dy", f)
    for z in [(0, 0), (1, 2), (3, -3), (4, 1), (5, -1)]:
        assert dy.scalar_at(z) == mu * f.scalar_at(z)


def test_e_minus_one():
    assert e_minus_one((0, 0)) == GR(1)
    assert e_minus_one((0, 1)) == GR(0, -1)
    assert e_minus_one((1, 5)) == GR(0)
    f = LatticeFunction.tabulate(e_minus_one, Window(0, 4, -2, 2), exact=True)
    dx = apply_difference("dx", f)
    assert dx.equals(f.restrict(Window(0, 3, -2, 2)).scale(GR(-1)))


def test_z_operator():
    one = LatticeFunction.constant([[1]], W)
    assert z_apply(one).equals(basis_table(1, W))
    f = basis_table(3, W) + e_lambda_table(GR(Fraction(1, 2)), W)
    assert apply_difference("dx", z_apply(f)).equals(f.restrict(Window(0, 4, -3, 3)))
    inner = Window(0, 4, -3, 3)
    zd = z_apply(apply_difference("dx", f))
    f0 = f.scalar_at((0, 0))
    assert zd.equals(f.restrict(inner) - LatticeFunction.constant([[f0]], inner))


def test_taylor_examples():
    c = taylor_coefficients(basis_table(3, Window(0, 6, -1, 1)), 5)
    assert [v[0, 0] for v in c.coeffs] == [GR(0), GR(0), GR(0), GR(1), GR(0), GR(0)]
    c = taylor_coefficients(LatticeFunction.constant([[GR(2, 1)]], Window(0, 3, 0, 0)), 3)
    assert [v[0, 0] for v in c.coeffs] == [GR(2, 1), GR(0), GR(0), GR(0)]
    c = taylor_coefficients(e_lambda_table(GR(Fraction(1, 2)), Window(0, 4, 0, 0)), 4)
    assert [v[0, 0] for v in c.coeffs] == [GR(Fraction(1, 2 ** k)) for k in range(5)]


def test_series_eval_examples():
    c = CoefficientSeries.scalar([0, 0, 1])
    assert series_eval(c, (2, 3))[0, 0] == basis_poly(2, (2, 3))
    lam = 0.9
    c = CoefficientSeries.scalar([lam ** n for n in range(201)], exact=False)
    assert abs(series_eval(c, (2, 3))[0, 0] - e_lambda(lam, (2, 3))) <= 1e-8
    c = CoefficientSeries.scalar([1.6 ** n for n in range(201)], exact=False)
    with pytest.warns(SeriesDivergenceWarning):
        series_eval(c, (1, 1))


def test_convolve_examples():
    b = CoefficientSeries.scalar([3, 1, 4])
    assert convolve(CoefficientSeries.scalar([1, 0, 0]), b).equals(b)
    assert convolve(CoefficientSeries.scalar([1, 1]), CoefficientSeries.scalar([1, 1])).equals(
        CoefficientSeries.scalar([1, 2, 1]))
    with pytest.raises(ValueError):
        convolve(CoefficientSeries(np.zeros((2, 2, 3))), CoefficientSeries(np.zeros((2, 2, 3))))


def test_h2_norm_examples():
    assert h2_norm(CoefficientSeries.scalar([0])) == 0
    assert h2_norm(CoefficientSeries.scalar([1, 1, 1])) == pytest.approx(math.sqrt(3))


def test_basis_csv_header_and_rows():
    text = basis_csv(2, Window(0, 1, 0, 1))
    lines = text.strip().split("\n")
    assert lines[0] == "x,y,n,re,im"
    assert len(lines) == 1 + 4 * 3
    assert "1,1,2,-1/2,1/2" in lines


def test_coefficient_series_json_roundtrip():
    c = CoefficientSeries.scalar([GR(1, 2), GR(Fraction(1, 3))])
    assert CoefficientSeries.from_json(c.to_json()).equals(c)


small = st.builds(GR, st.integers(-4, 4), st.integers(-4, 4))


@settings(max_examples=30, deadline=None)
@given(st.lists(small, min_size=1, max_size=8))
def test_taylor_roundtrip(values):
    c = CoefficientSeries.scalar(values)
    t = series_table(c, Window(0, len(values) + 1, -2, 2))
    assert taylor_coefficients(t, len(values) - 1).equals(c)


@settings(max_examples=30, deadline=None)
@given(st.lists(small, min_size=1, max_size=8))
def test_h2_shift_identity(values):
    c = CoefficientSeries.scalar(values)
    assert h2_norm_squared(c.backward_shift()) == h2_norm_squared(c) - values[0].abs2()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 4), st.integers(-3, 3), st.integers(0, 4), st.integers(-3, 3), st.integers(0, 8))
def test_chu_vandermonde(x1, y1, x2, y2, n):
    z, w = LatticePoint(x1, y1), LatticePoint(x2, y2)
    rhs = sum((basis_poly(k, z) * basis_poly(n - k, w) for k in range(n + 1)), GR(0))
    assert basis_poly(n, z + w) == rhs


@settings(max_examples=25, deadline=None)
@given(st.builds(GR, st.fractions(-3, 3, max_denominator=5), st.fractions(-3, 3, max_denominator=5)))
def test_eigenrelation(lam):
    if lam in (GR(-1), GR(-1, -1), GR(-1, 1)):
        return
    f = e_lambda_table(lam, Window(0, 3, -2, 2))
    assert apply_difference("dx", f).equals(f.restrict(Window(0, 2, -2, 2)).scale(lam))


def test_z_decay():
    w = Window(0, 4, -2, 2)
    assert max(abs(basis_row(z, 200, exact=False)[200]) for z in w.points()) <= 1e-6

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dalat.basis import basis_poly
from dalat.lattice import LatticeFunction, Window
from dalat.mesh import (MeshError, MeshPoint, adjoint_identity_check, as_step, basis_poly_h,
                        basis_table_h, convergence_csv, convergence_table, delta_xh,
                        falling_product, kernel_h, limit_kernel, mesh_adjoint_check,
                        mesh_residual, taylor_coefficients_h, z_h)
from dalat.scalar import GR


def test_basis_poly_h_examples():
    assert basis_poly_h(1, (Fraction(3, 4), 0), Fraction(1, 4)) == GR(Fraction(3, 4))
    assert basis_poly_h(2, (1, 0), "1/2") == GR(Fraction(1, 4))
    assert basis_poly_h(2, (1, 0), "1/4") == GR(Fraction(3, 8))


def test_off_mesh_point_rejected():
    with pytest.raises(MeshError):
        basis_poly_h(2, (Fraction(1, 3), 0), "1/2")
    with pytest.raises(MeshError):
        as_step(0)
    with pytest.raises(MeshError):
        basis_poly_h(1, (-1, 0), 1)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 8), st.integers(0, 12), st.sampled_from(["1", "1/2", "1/3", "1/8"]))
def test_real_axis_matches_falling_product(n, j, h):
    h = as_step(h)
    assert basis_poly_h(n, (j * h, 0), h) == GR(falling_product(n, j * h, h))


def test_mesh_point_forms():
    p = MeshPoint.at("1/2+1/4i", "1/4")
    assert (p.j, p.k) == (2, 1) and p.value == GR(Fraction(1, 2), Fraction(1, 4))
    assert MeshPoint.at(0.5 + 0.25j, "1/4") == p
    assert MeshPoint.at(GR(Fraction(1, 2), Fraction(1, 4)), Fraction(1, 4)) == p


def test_operators_on_mesh():
    h = Fraction(1, 4)
    win = Window(0, 8, -3, 3)
    one = LatticeFunction.constant([[GR(1)]], win, exact=True)
    zt = z_h(one, h)
    for p in win.points():
        assert zt.scalar_at(p) == GR(h * p.x, h * p.y)
    for n in range(1, 5):
        d = delta_xh(basis_table_h(n, win, h), h)
        assert d.equals(basis_table_h(n - 1, win, h).restrict(d.window))


def test_delta_inverts_z_on_polynomials():
    h = Fraction(1, 3)
    win = Window(0, 6, -2, 2)
    f = basis_table_h(3, win, h) + basis_table_h(1, win, h).scale(GR(2, -1))
    g = delta_xh(z_h(f, h), h)
    assert g.equals(f.restrict(g.window))


def test_mesh_tables_are_analytic():
    for n in range(6):
        assert mesh_residual(basis_table_h(n, Window(0, 5, -3, 3), "1/2")) == (True, 0.0)


def test_taylor_coefficients_h():
    h = Fraction(1, 2)
    f = basis_table_h(3, Window(0, 6, 0, 0), h)
    assert taylor_coefficients_h(f, h, 4) == [0, 0, 0, 1, 0]


def test_kernel_h_examples():
    for w in ["1+i", "3/2-1/2i", 2]:
        val, _ = kernel_h(0, w, "1/2", 30)
        assert val == 1
    lim, tail = limit_kernel(1, 1, 60)
    assert tail < 1e-15
    want = math.fsum(1 / math.factorial(n) ** 2 for n in range(60))
    assert abs(lim - want) <= 1e-15
    errs = [abs(kernel_h(1, 1, h, 60)[0] - lim) for h in ["1", "1/2", "1/4", "1/8"]]
    assert all(a > b for a, b in zip(errs, errs[1:]))


def test_kernel_h_is_hermitian():
    a, _ = kernel_h("1+i", "1/2", "1/2", 20, exact=True)
    b, _ = kernel_h("1/2", "1+i", "1/2", 20, exact=True)
    assert a == b.conjugate()


def test_adjoint_identity_examples():
    assert adjoint_identity_check(1, 0) == (1, 1, True)
    assert adjoint_identity_check(3, 1) == (0, 0, True)
    assert adjoint_identity_check(4, 3) == (144, 144, True)


@given(st.integers(0, 20), st.integers(0, 20))
def test_adjoint_identity_all_pairs(n, m):
    lhs, rhs, eq = adjoint_identity_check(n, m)
    assert eq
    assert lhs == ((m + 1) * math.factorial(m) ** 2 if n == m + 1 else 0)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=1, max_size=8),
       st.lists(st.integers(-3, 3), min_size=1, max_size=8),
       st.sampled_from(["1", "1/2", "1/5"]))
def test_mesh_adjoint_identity(a, b, h):
    lhs, rhs, eq = mesh_adjoint_check(a, b, h)
    assert eq


def test_convergence_table_exact():
    rows = convergence_table(3, 2, ["1", "1/2", "1/4"])
    assert [r[0] for r in rows] == [1, Fraction(1, 2), Fraction(1, 4)]
    assert all(r[2] == Fraction(8, 6) for r in rows)
    errs = [r[3] for r in rows]
    assert errs[0] > errs[1] > errs[2]
    assert convergence_csv(2, 1, ["1/2"]) == "h,value,limit,abs_err\n1/2,1/4,1/2,1/4\n"


def test_complex_limit_tail():
    z = GR(1, 1)
    limit = complex(z) ** 3 / 6
    errs = [abs(complex(basis_poly_h(3, z, Fraction(1, 2 ** k))) - limit) for k in range(3, 7)]
    assert all(a >= b for a, b in zip(errs, errs[1:])) and errs[-1] <= 0.02


def test_unit_mesh_is_unit_lattice():
    for n in range(5):
        assert basis_poly_h(n, (2, -1), 1) == basis_poly(n, (2, -1))

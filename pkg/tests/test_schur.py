import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dalat import linalg as la
from dalat.basis import basis_poly
from dalat.corpus import (random_contractive_colligation, random_exact_coisometry,
                          random_small_rational)
from dalat.lattice import LatticePoint, Window
from dalat.realization import markov_params, rational_eval, resolvent_eval
from dalat.schur import (Colligation, CoisometryError, KernelTruncationWarning, dbr_residual,
                         defect_completion, gram_matrix, gram_psd, is_coisometry, kernel_closed,
                         kernel_series, multiplier_contraction, random_coisometry,
                         schur_check, schur_function)
from dalat.scalar import GR

SHIFT = Colligation.from_block([[0, 1], [1, 0]], 1, exact=True)   # S(z) = z


def constant(c):
    return Colligation.unchecked(np.zeros((0, 0)), np.zeros((0, 1)), np.zeros((1, 0)),
                                 np.array([[c]], dtype=complex))


def test_is_coisometry_examples():
    assert is_coisometry(np.eye(3)) == (True, 0.0)
    assert is_coisometry(np.array([[0, 1], [1, 0]], dtype=complex)) == (True, 0.0)
    ok, defect = is_coisometry(np.array([[1, 1], [0, 1]], dtype=complex))
    assert not ok and defect > 0


def test_random_coisometry_examples():
    cg = random_coisometry(0, 1, 1, 5)
    assert abs(abs(cg.D[0, 0]) - 1) <= 1e-12
    cg = random_coisometry(1, 1, 1, 7)
    assert cg.block.shape == (2, 2) and is_coisometry(cg.block)[1] <= 1e-12
    cg = random_coisometry(4, 2, 3, 1)
    assert cg.block.shape == (6, 7) and is_coisometry(cg.block)[1] <= 1e-12
    with pytest.raises(ValueError):
        random_coisometry(1, 3, 2, 0)


def test_random_coisometry_is_deterministic():
    a, b = random_coisometry(3, 2, 2, 11), random_coisometry(3, 2, 2, 11)
    assert np.array_equal(a.block, b.block)


def test_colligation_rejects_non_coisometry():
    with pytest.raises(CoisometryError):
        Colligation(np.eye(1) * 0.5, np.zeros((1, 1)), np.zeros((1, 1)), np.eye(1))


def test_schur_function_examples():
    S = schur_function(SHIFT)
    for z in [(1, 1), (2, -3), (0, 2)]:
        assert rational_eval(S, z)[0, 0] == LatticePoint(*z).scalar()
    S = schur_function(constant(0.3 - 0.4j))
    assert S.n == 0 and S.D[0, 0] == 0.3 - 0.4j
    cg = random_coisometry(3, 1, 2, 4)
    M = markov_params(schur_function(cg), 4).coeffs
    assert np.allclose(M[0], cg.D) and np.allclose(M[2], cg.C @ cg.A @ cg.B)


def test_kernel_closed_examples():
    for z, w in [((0, 0), (1, 1)), ((3, -2), (2, 4))]:
        assert kernel_closed(SHIFT, z, w)[0, 0] == GR(1)
    assert np.allclose(kernel_closed(constant(1j), (2, 1), (1, -1)), 0)
    cg = random_coisometry(2, 2, 3, 9)
    assert np.allclose(kernel_closed(cg, (0, 0), (0, 0)), np.eye(2) - cg.D @ cg.D.conj().T)


def test_kernel_series_examples():
    z, w = LatticePoint(3, 1), LatticePoint(2, -2)
    for N in (1, 4, 9):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", KernelTruncationWarning)
            got = kernel_series(SHIFT, z, w, N, terms=N + 1)[0, 0]
        # telescoping leaves exactly 1 - z^(N) conj(w^(N))
        assert got == 1 - basis_poly(N, z) * basis_poly(N, w).conjugate()
    c = 0.6 + 0.3j
    want = (1 - abs(c) ** 2) * sum(complex(basis_poly(n, (1, 1)) * basis_poly(n, (2, 0)).conjugate())
                                   for n in range(50))
    assert abs(kernel_series(constant(c), (1, 1), (2, 0), 50)[0, 0] - want) <= 1e-12


def test_kernel_series_flags_short_truncation():
    with pytest.warns(KernelTruncationWarning):
        kernel_series(SHIFT, (3, 1), (2, 2), 2)


def test_kernel_series_matches_closed_form():
    for seed in range(3):
        cg = random_coisometry(1 + seed, 1, 2, 100 + seed)
        for z in Window(0, 3, -1, 2).points():
            d = kernel_closed(cg, z, (2, 1)) - kernel_series(cg, z, (2, 1), 300)
            assert la.max_abs(d) <= 1e-6


def test_gram_psd_examples():
    pts = list(Window(0, 1, 0, 4).points())
    G = gram_matrix(SHIFT, pts)
    assert all(v == GR(1) for v in G.flat)
    ok, m = gram_psd(SHIFT, pts)
    assert ok and abs(m) <= 1e-12
    assert gram_psd(constant(1.0), pts)[0]
    cg = random_coisometry(8, 2, 3, 21)
    pts = list(Window(0, 5, -5, 5).points())[::2][:30]
    assert gram_psd(cg, pts)[1] >= -1e-9


def test_gram_of_constant_is_zero():
    G = gram_matrix(constant(0.5), [(0, 0), (1, 2)])
    assert G.shape == (2, 2) and not np.any(G)
    assert gram_psd(constant(0.5), [(0, 0), (1, 2)]) == (True, 0.0)


def test_exact_gram_uses_ldl():
    cg = random_exact_coisometry(3, 1, 1, 2)
    ok, m = gram_psd(cg, [(0, 0), (1, 1), (2, -1)])
    assert ok and m >= -1e-12


def test_defect_completion_examples():
    cg = defect_completion([[0]], [[1]])
    assert is_coisometry(cg.block, 1e-10)[0]
    cg = defect_completion([[0]], [[0]])
    assert np.allclose(cg.B @ cg.B.conj().T, np.eye(1)) and np.allclose(cg.D @ cg.D.conj().T, np.eye(1))
    cg = defect_completion([[0.5]], [[0.5]])
    assert is_coisometry(cg.block, 1e-12)[0]
    with pytest.raises(CoisometryError):
        defect_completion([[1]], [[1]])


def test_multiplier_contraction_examples():
    ok, norm = multiplier_contraction(constant(0.6), 16)
    assert ok and norm == pytest.approx(0.6)
    ok, norm = multiplier_contraction(SHIFT, 16)
    assert ok and norm == pytest.approx(1.0)
    for seed in range(5):
        assert multiplier_contraction(random_coisometry(4, 2, 3, seed), 64)[0]


def test_adjoint_resolvent_identity():
    A = random_small_rational(3, 2)
    for w in Window(0, 4, -4, 4).points():
        assert la.equal(la.ctranspose(resolvent_eval(A, w)), resolvent_eval(la.ctranspose(A), w.conj()))


def test_kernel_is_hermitian_exactly():
    cg = random_exact_coisometry(4, 1, 1, 1)
    for z, w in [((0, 1), (1, -1)), ((2, 0), (1, 2))]:
        assert la.equal(la.ctranspose(kernel_closed(cg, z, w)), kernel_closed(cg, w, z))


def test_dbr_identity():
    for seed in range(3):
        cg = random_contractive_colligation(seed, 3, 1)
        assert max(abs(np.linalg.eigvals(cg.A))) <= 0.9 + 1e-12
        assert dbr_residual(cg, (1, 2), [1.0], 200) <= 1e-6


def test_colligation_json_roundtrip():
    cg = random_coisometry(2, 1, 2, 3)
    back = Colligation.from_json(cg.to_json())
    assert np.array_equal(back.block, cg.block) and back.seed == 3


def test_schur_check_report():
    rep = schur_check(5, (3, 1, 2), list(Window(0, 3, -1, 2).points()))
    assert rep["passed"] and rep["min_eig"] >= -1e-9 and rep["opnorm"] <= 1 + 1e-9
    assert rep["kernel_match_err"] <= 1e-6


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 31), st.integers(1, 6), st.integers(1, 3))
def test_positivity_and_contraction(seed, n, m):
    cg = random_coisometry(n, m, 3, seed)
    assert gram_psd(cg, list(Window(0, 3, -2, 2).points())[::2])[0]
    assert multiplier_contraction(cg, 32)[0]

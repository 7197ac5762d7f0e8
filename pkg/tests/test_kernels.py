import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dalat import _pykernels as py
from dalat import kernels

ck = pytest.importorskip("dalat._ckernels")


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 12), st.integers(-12, 12), st.integers(0, 20))
def test_basis_rows_agree(x, y, N):
    assert ck.basis_row_exact(x, y, N) == py.basis_row_exact(x, y, N)
    assert np.allclose(ck.basis_row_float(x, y, N), py.basis_row_float(x, y, N), rtol=1e-13, atol=1e-13)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_residual_and_shifted_sums_agree(seed):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal((4, 5, 2)) + 1j * rng.standard_normal((4, 5, 2))
    assert ck.ferrand_residual(v) == pytest.approx(py.ferrand_residual(v), rel=1e-14)
    c = rng.standard_normal((6, 3)) + 1j * rng.standard_normal((6, 3))
    b = rng.standard_normal(20) + 1j * rng.standard_normal(20)
    assert np.allclose(ck.shifted_sums(c, b, 15), py.shifted_sums(c, b, 15), atol=1e-13)


def test_read_only_inputs_accepted():
    c = np.ones((2, 1), dtype=complex)
    b = np.ones(5, dtype=complex)
    c.flags.writeable = b.flags.writeable = False
    assert np.allclose(ck.shifted_sums(c, b, 3), py.shifted_sums(c, b, 3))


def test_compiled_backend_selected_by_default():
    if os.environ.get("DALAT_PURE_PYTHON", "") not in ("", "0"):
        pytest.skip("pure-Python backend forced")
    assert kernels.IMPLEMENTATION == "cython"


def test_environment_forces_fallback():
    env = dict(os.environ, DALAT_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import dalat; print(dalat.IMPLEMENTATION)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"

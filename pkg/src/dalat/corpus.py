"""Seeded generators for test and verification data.

All generators take a ``numpy.random.Generator`` (or a seed) so that a
given seed always yields the same objects.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import linalg as la
from .basis import CoefficientSeries
from .realization import Realization, check_admissible
from .scalar import GR
from .schur import Colligation, defect_completion

__all__ = [
    "rng_for",
    "random_gr",
    "random_rational_matrix",
    "random_lambda",
    "random_admissible",
    "random_small_rational",
    "random_realization",
    "random_minimal_float",
    "random_series",
    "random_exact_unitary",
    "random_exact_coisometry",
    "random_contractive_colligation",
]


def rng_for(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_gr(rng, span: int = 3, den: int = 4) -> GR:
    """Gaussian rational with numerators in ``[-span, span]``, denominators ``<= den``."""
    rng = rng_for(rng)
    a, b = rng.integers(-span, span + 1, size=2)
    c, d = rng.integers(1, den + 1, size=2)
    return GR(Fraction(int(a), int(c)), Fraction(int(b), int(d)))


def random_rational_matrix(rng, shape, span: int = 3, den: int = 4) -> np.ndarray:
    rng = rng_for(rng)
    out = np.empty(shape, dtype=object)
    for idx in np.ndindex(*shape):
        out[idx] = random_gr(rng, span, den)
    return out


def random_lambda(rng) -> GR:
    """Rational eigenvalue avoiding ``-1`` and ``-2 a(+/-) = -1 -/+ i``."""
    bad = {GR(-1), GR(-1, -1), GR(-1, 1)}
    while True:
        lam = random_gr(rng, span=4, den=5)
        if lam not in bad:
            return lam


def random_admissible(rng, n: int, span: int = 3, den: int = 4) -> np.ndarray:
    """Rational ``n x n`` state matrix with ``I + a(+/-) A`` invertible."""
    rng = rng_for(rng)
    while True:
        A = random_rational_matrix(rng, (n, n), span, den)
        if check_admissible(A)[0]:
            return A


def _frobenius_bound(M: np.ndarray) -> Fraction:
    """Rational upper bound on the Frobenius norm."""
    sq = sum((v.abs2() for v in M.flat), Fraction(0))
    r = math.isqrt(sq.numerator * 10 ** 6 // sq.denominator) + 1
    return Fraction(r, 1000)


def random_small_rational(rng, n: int, radius: Fraction = Fraction(9, 10)) -> np.ndarray:
    """Rational ``n x n`` matrix with Frobenius norm (hence spectral radius) ``<= radius``."""
    rng = rng_for(rng)
    while True:
        M = random_rational_matrix(rng, (n, n))
        if any(M.flat):
            break
    s = GR(Fraction(radius) / _frobenius_bound(M))
    return la.normalize(M * s, True)


def random_realization(rng, n: int, m: int = 1, p: int = 1, contractive: bool = False) -> Realization:
    """Exact realization with an admissible (optionally small) state matrix."""
    rng = rng_for(rng)
    A = random_small_rational(rng, n) if contractive and n else random_admissible(rng, n)
    B = random_rational_matrix(rng, (n, p))
    C = random_rational_matrix(rng, (m, n))
    D = random_rational_matrix(rng, (m, p))
    return Realization(A, B, C, D, exact=True)


def random_minimal_float(rng, n: int, rho: float = 0.8) -> Realization:
    """SISO float realization of state dimension ``n`` that is controllable and observable.

    The state matrix is diagonal with distinct eigenvalues of modulus
    ``<= rho``; ``B`` and ``C`` have entries bounded away from zero.
    """
    rng = rng_for(rng)
    while True:
        mod = rng.uniform(0.2, rho, n)
        arg = rng.uniform(-np.pi, np.pi, n)
        lam = mod * np.exp(1j * arg)
        gaps = [abs(a - b) for i, a in enumerate(lam) for b in lam[i + 1:]]
        if not gaps or min(gaps) > 0.15:
            break
    A = np.diag(lam)
    B = (rng.uniform(0.5, 1.5, (n, 1)) * np.exp(1j * rng.uniform(-np.pi, np.pi, (n, 1))))
    C = (rng.uniform(0.5, 1.5, (1, n)) * np.exp(1j * rng.uniform(-np.pi, np.pi, (1, n))))
    D = np.array([[rng.standard_normal() + 1j * rng.standard_normal()]])
    return Realization(A, B, C, D, exact=False)


def random_series(rng, length: int, rows: int = 1, cols: int = 1) -> CoefficientSeries:
    rng = rng_for(rng)
    return CoefficientSeries(random_rational_matrix(rng, (length, rows, cols)))


def random_exact_unitary(rng, k: int) -> np.ndarray:
    """Gaussian-rational unitary ``(I - K)(I + K)^{-1}`` with ``K`` skew-Hermitian."""
    rng = rng_for(rng)
    X = random_rational_matrix(rng, (k, k), span=2, den=3)
    K = X - la.ctranspose(X)
    I = la.eye(k)
    return la.normalize((I - K) @ la.inv(I + K), True)


def random_exact_coisometry(rng, n: int, m: int, p: int) -> Colligation:
    """Exact colligation: the first ``n + m`` rows of an exact unitary of size ``n + p``."""
    if m > p:
        raise ValueError("needs m <= p")
    U = random_exact_unitary(rng, n + p)
    return Colligation.from_block(U[: n + m], n, exact=True)


def random_contractive_colligation(rng, n: int, m: int, scale: float = 0.9) -> Colligation:
    """Coisometry completing a random ``[A; C]`` of spectral norm ``scale``.

    ``rho(A) <= ||A|| <= scale``; the input dimension is ``p = n + m``.
    """
    rng = rng_for(rng)
    col = rng.standard_normal((n + m, n)) + 1j * rng.standard_normal((n + m, n))
    col *= scale / np.linalg.norm(col, 2)
    return defect_completion(col[:n], col[n:])

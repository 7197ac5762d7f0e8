"""Discrete analytic Schur functions from coisometric colligations.

A colligation ``M = [[A, B], [C, D]]`` with ``M M* = I`` gives the Schur
function ``S = D + C e_A o (zB)`` whose kernel is

    K^S(z, w) = sum_n z^(n) conj(w^(n)) I - (Z^n S)(z) (Z^n S)(w)*
              = F(z) F(w)*,      F(z) = C e_A(z).

This module evaluates the kernel both ways, certifies positivity on
point sets, completes ``[A; C]`` to a coisometry and checks that
multiplication by ``S`` is contractive on finite sections.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from . import linalg as la
from .basis import basis_row
from .lattice import LatticePoint, Window
from .realization import Realization, _require_admissible, markov_params, resolvent_eval
from .scalar import GR, ModeError, format_fraction, to_complex_array

__all__ = [
    "Colligation",
    "CoisometryError",
    "KernelTruncationWarning",
    "is_coisometry",
    "random_coisometry",
    "schur_function",
    "kernel_closed",
    "kernel_series",
    "gram_matrix",
    "gram_psd",
    "defect_completion",
    "multiplier_section",
    "multiplier_contraction",
    "dbr_residual",
    "schur_check",
    "PSD_TOL",
    "CONTRACTION_TOL",
]

PSD_TOL = 1e-9
CONTRACTION_TOL = 1e-9
CLIP_TOL = 1e-12


class CoisometryError(ValueError):
    """A block operator is not (close enough to) a coisometry or contraction."""


class KernelTruncationWarning(RuntimeWarning):
    """The last term of a truncated kernel series is still above tolerance."""


@dataclass(frozen=True, eq=False)
class Colligation:
    """Block operator ``[[A, B], [C, D]]`` from ``C^n + C^p`` to ``C^n + C^m``."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    coisometry_tol: float = 1e-10
    seed: int | None = None
    exact: bool = field(default=False)
    checked: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        R = Realization(self.A, self.B, self.C, self.D, exact=self.exact)
        for k in "ABCD":
            object.__setattr__(self, k, getattr(R, k))
        if self.checked:
            ok, defect = is_coisometry(self.block, self.coisometry_tol)
            if not ok:
                raise CoisometryError(f"colligation is not a coisometry: ||MM* - I|| = {defect:.3e}")

    @classmethod
    def unchecked(cls, A, B, C, D, exact: bool = False) -> "Colligation":
        """Build without the coisometry check (e.g. constant Schur functions ``|c| < 1``)."""
        return cls(A, B, C, D, exact=exact, checked=False)

    @classmethod
    def from_block(cls, M, n: int, exact: bool = False, **kw) -> "Colligation":
        M = np.asarray(M, dtype=object if exact else complex)
        if exact:
            M = la.normalize(M, True)
        return cls(M[:n, :n], M[:n, n:], M[n:, :n], M[n:, n:], exact=exact, **kw)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.D.shape[0]

    @property
    def p(self) -> int:
        return self.D.shape[1]

    @property
    def block(self) -> np.ndarray:
        top = np.concatenate([self.A, self.B], axis=1)
        bottom = np.concatenate([self.C, self.D], axis=1)
        return np.concatenate([top, bottom], axis=0)

    def to_float(self) -> "Colligation":
        return Colligation(*(to_complex_array(getattr(self, k)) for k in "ABCD"),
                           coisometry_tol=self.coisometry_tol, seed=self.seed, exact=False,
                           checked=self.checked)

    def to_json(self) -> dict:
        doc = Realization(self.A, self.B, self.C, self.D, exact=self.exact).to_json()
        doc.update(coisometry_tol=self.coisometry_tol, seed=self.seed)
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "Colligation":
        R = Realization.from_json(doc)
        return cls(R.A, R.B, R.C, R.D, coisometry_tol=float(doc.get("coisometry_tol", 1e-10)),
                   seed=doc.get("seed"), exact=R.exact)


def is_coisometry(M, tol: float = 1e-10) -> tuple[bool, float]:
    """``(||M M* - I||_2 <= tol, ||M M* - I||_2)``; exact input demands equality."""
    M = np.asarray(M)
    k = M.shape[0]
    if M.dtype == object:
        G = M @ la.ctranspose(M) - la.eye(k)
        exact_ok = not any(G.flat)
        norm = float(np.linalg.norm(to_complex_array(G), 2)) if k else 0.0
        return exact_ok, norm
    G = M @ M.conj().T - np.eye(k)
    norm = float(np.linalg.norm(G, 2)) if k else 0.0
    return norm <= tol, norm


def random_coisometry(n: int, m: int, p: int, seed: int) -> Colligation:
    """Seeded coisometry from ``C^{n+p}`` to ``C^{n+m}`` (orthonormal rows).

    Orthonormalizes the rows of a complex Gaussian matrix drawn from
    ``numpy.random.default_rng(seed)``.
    """
    if min(n, m, p) < 0:
        raise ValueError("dimensions must be nonnegative")
    if m > p:
        raise ValueError(f"no coisometry from C^{n + p} to C^{n + m}: needs m <= p")
    rng = np.random.default_rng(seed)
    rows, cols = n + m, n + p
    G = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    if rows == 0:
        M = np.zeros((0, cols), dtype=complex)
    else:
        Q, R = np.linalg.qr(G.conj().T)
        # fix the phase so the result does not depend on LAPACK sign conventions
        ph = np.diag(R) / np.abs(np.diag(R))
        M = (Q * ph).conj().T
    return Colligation.from_block(M, n, seed=seed)


def schur_function(cg: Colligation) -> Realization:
    """``S = D + C e_A o (zB)`` as a realization."""
    R = Realization(cg.A, cg.B, cg.C, cg.D, exact=cg.exact)
    _require_admissible(R.A)
    return R


def _F(cg: Colligation, z) -> np.ndarray:
    if cg.n == 0:
        return la.zeros((cg.m, 0), cg.exact)
    return cg.C @ resolvent_eval(cg.A, z)


def kernel_closed(cg: Colligation, z, w) -> np.ndarray:
    """``K^S(z, w) = C e_A(z) e_A(w)* C*``."""
    Fz = _F(cg, z)
    Fw = _F(cg, w)
    out = Fz @ la.ctranspose(Fw)
    return la.normalize(out, cg.exact) if out.size else la.zeros((cg.m, cg.m), cg.exact)


def _shifted_values(coeffs: np.ndarray, row, N: int, exact: bool) -> list:
    """``Y[n] = sum_k coeffs[k] z^(n+k)`` for ``n < N``."""
    K = coeffs.shape[0]
    if exact:
        out = []
        for n in range(N):
            acc = la.zeros(coeffs.shape[1:], True)
            for k in range(min(K, len(row) - n)):
                if row[n + k]:
                    acc = acc + coeffs[k] * row[n + k]
            out.append(acc)
        return out
    flat = coeffs.reshape(K, -1)
    vals = kernels.shifted_sums(flat, row, N)
    return list(vals.reshape((N,) + coeffs.shape[1:]))


def kernel_series(cg: Colligation, z, w, N: int, terms: int | None = None,
                  tol: float = 1e-10) -> np.ndarray:
    """Truncated kernel ``sum_{n<N} z^(n) conj(w^(n)) I - (Z^n S)(z) (Z^n S)(w)*``.

    ``(Z^n S)`` is the series of ``S`` shifted by ``n`` places, truncated to
    ``terms`` coefficients (default ``N``). Emits
    :class:`KernelTruncationWarning` if the last increment exceeds ``tol``.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    z, w = LatticePoint.coerce(z), LatticePoint.coerce(w)
    terms = N if terms is None else terms
    exact = cg.exact
    S_hat = markov_params(schur_function(cg), terms - 1).coeffs
    L = N + terms
    rz = basis_row(z, L, exact)
    rw = basis_row(w, L, exact)
    Yz = _shifted_values(S_hat, rz, N, exact)
    Yw = Yz if z == w else _shifted_values(S_hat, rw, N, exact)
    I = la.eye(cg.m, exact)
    total = la.zeros((cg.m, cg.m), exact)
    last = None
    for n in range(N):
        c = rz[n] * rw[n].conjugate()
        inc = I * c - Yz[n] @ la.ctranspose(Yw[n])
        total = total + inc
        last = inc
    if last is not None and la.max_abs(last) > tol:
        warnings.warn(f"kernel series at N={N} still changing by {la.max_abs(last):.3e}",
                      KernelTruncationWarning, stacklevel=2)
    return total


def gram_matrix(cg: Colligation, points) -> np.ndarray:
    """Block Gram matrix ``[K^S(z_i, z_j)]``."""
    pts = [LatticePoint.coerce(p) for p in points]
    Fs = [_F(cg, z) for z in pts]
    m = cg.m
    G = la.zeros((m * len(pts), m * len(pts)), cg.exact)
    for i, Fi in enumerate(Fs):
        for j, Fj in enumerate(Fs):
            blk = Fi @ la.ctranspose(Fj)
            if blk.size and cg.n:
                G[i * m:(i + 1) * m, j * m:(j + 1) * m] = blk
    return G


def gram_psd(cg: Colligation, points, tol: float = PSD_TOL) -> tuple[bool, float]:
    """Positivity of the kernel on ``points``: ``(min_eig >= -tol, min_eig)``.

    Exact colligations are certified by exact pivoted LDL*; the reported
    minimum eigenvalue is computed in floating point either way.
    """
    if not len(points):
        raise ValueError("need at least one point")
    G = gram_matrix(cg, points)
    Gf = to_complex_array(G)
    min_eig = float(np.linalg.eigvalsh((Gf + Gf.conj().T) / 2)[0])
    if cg.exact:
        ok, _ = la.ldl_min_pivot(G)
        return ok, min_eig
    return min_eig >= -tol, min_eig


def defect_completion(A, C) -> Colligation:
    """Complete ``[A; C]`` to a coisometry ``[[A, B], [C, D]]``.

    With ``M = [A* C*]``, ``[B; D]`` is the Hermitian square root of
    ``I - M* M``; eigenvalues in ``[-1e-12, 0)`` are clipped to zero.
    """
    A = to_complex_array(np.asarray(A))
    C = to_complex_array(np.asarray(C))
    n, m = A.shape[0], C.shape[0]
    if A.shape != (n, n) or C.shape[1] != n:
        raise ValueError("A must be n x n and C m x n")
    col = np.concatenate([A, C], axis=0)
    defect = np.eye(n + m) - col @ col.conj().T
    defect = (defect + defect.conj().T) / 2
    lam, V = np.linalg.eigh(defect)
    if lam.size and lam[0] < -CLIP_TOL:
        raise CoisometryError(f"[A* C*] is not a contraction (defect eigenvalue {lam[0]:.3e})")
    root = (V * np.sqrt(np.clip(lam, 0.0, None))) @ V.conj().T
    return Colligation(A, root[:n], C, root[n:], exact=False)


def multiplier_section(cg: Colligation, N: int) -> np.ndarray:
    """Block lower-triangular Toeplitz matrix of ``S_hat(0..N-1)``."""
    if N < 1:
        raise ValueError("N must be at least 1")
    S_hat = to_complex_array(markov_params(schur_function(cg), N - 1).coeffs)
    m, p = cg.m, cg.p
    T = np.zeros((N * m, N * p), dtype=complex)
    for i in range(N):
        for j in range(i + 1):
            T[i * m:(i + 1) * m, j * p:(j + 1) * p] = S_hat[i - j]
    return T


def multiplier_contraction(cg: Colligation, N: int) -> tuple[bool, float]:
    """``(opnorm <= 1 + 1e-9, opnorm)`` for the ``N``-block finite section."""
    T = multiplier_section(cg, N)
    opnorm = float(np.linalg.norm(T, 2)) if T.size else 0.0
    return opnorm <= 1 + CONTRACTION_TOL, opnorm


def dbr_residual(cg: Colligation, w, alpha, N: int) -> float:
    """Max deviation between two coefficient vectors of ``K^S(., w) alpha``.

    One is ``C A^n F(w)* alpha``; the other is ``(I - T T*)`` applied to
    the coefficients ``conj(w^(n)) alpha`` of ``K(., w) alpha``, with ``T``
    the ``N``-block multiplier section.
    """
    cgf = cg.to_float() if cg.exact else cg
    w = LatticePoint.coerce(w)
    alpha = np.asarray(alpha, dtype=complex).reshape(cgf.m)
    Fw = _F(cgf, w)
    v = Fw.conj().T @ alpha
    direct = []
    for _ in range(N):
        direct.append(cgf.C @ v)
        v = cgf.A @ v
    direct = np.concatenate(direct)
    row = basis_row(w, N - 1, exact=False)
    k = np.concatenate([np.conj(row[n]) * alpha for n in range(N)])
    T = multiplier_section(cgf, N)
    other = k - T @ (T.conj().T @ k)
    return float(np.max(np.abs(direct - other)))


def schur_check(seed: int, dims: tuple[int, int, int], points, N_series: int = 300,
                N_section: int = 64) -> dict:
    """Report used by the CLI: Gram positivity, section norm, two-route kernel error."""
    n, m, p = dims
    cg = random_coisometry(n, m, p, seed)
    pts = [LatticePoint.coerce(z) for z in points]
    coiso, defect = is_coisometry(cg.block, cg.coisometry_tol)
    psd, min_eig = gram_psd(cg, pts)
    contr, opnorm = multiplier_contraction(cg, N_section)
    err = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", KernelTruncationWarning)
        for z in pts[:4]:
            for w in pts[:4]:
                d = kernel_closed(cg, z, w) - kernel_series(cg, z, w, N_series)
                err = max(err, la.max_abs(d))
    return {
        "seed": seed,
        "dims": [n, m, p],
        "points": [str(z) for z in pts],
        "coisometry_defect": defect,
        "min_eig": min_eig,
        "opnorm": opnorm,
        "kernel_match_err": err,
        "passed": bool(coiso and psd and contr and err <= 1e-6),
    }

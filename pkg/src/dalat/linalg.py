"""Dense linear algebra that works in both scalar modes.

Exact matrices are numpy ``object`` arrays of :class:`~dalat.scalar.GaussianRational`
and are reduced by fraction Gaussian elimination; float matrices go to
``numpy.linalg``.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np
import scipy.linalg

from .scalar import GR, GaussianRational, ModeError, array_mode

__all__ = [
    "is_exact",
    "same_mode",
    "eye",
    "zeros",
    "normalize",
    "ctranspose",
    "det",
    "inv",
    "solve",
    "rank",
    "pivot_columns",
    "matrix_power",
    "charpoly_reversed",
    "ldl_min_pivot",
    "max_abs",
    "equal",
]

ONE = GR(1)
ZERO = GR(0)


def is_exact(a: np.ndarray) -> bool:
    return array_mode(np.asarray(a)) == "exact"


def same_mode(*arrays: np.ndarray) -> bool:
    """Common mode of ``arrays``; raises :class:`ModeError` if they disagree."""
    modes = {array_mode(np.asarray(a)) for a in arrays if np.asarray(a).size}
    if len(modes) > 1:
        raise ModeError("mixed scalar modes: exact and float matrices combined")
    return modes.pop() == "exact" if modes else all(
        np.asarray(a).dtype == object for a in arrays
    )


def eye(n: int, exact: bool = True) -> np.ndarray:
    if not exact:
        return np.eye(n, dtype=complex)
    out = np.full((n, n), ZERO, dtype=object)
    for i in range(n):
        out[i, i] = ONE
    return out


def zeros(shape, exact: bool = True) -> np.ndarray:
    if not exact:
        return np.zeros(shape, dtype=complex)
    return np.full(shape, ZERO, dtype=object)


def normalize(a: np.ndarray, exact: bool) -> np.ndarray:
    """Coerce stray ``int``/``Fraction`` entries (e.g. from empty products) to the mode."""
    a = np.asarray(a)
    if not exact:
        return a.astype(complex)
    out = np.empty(a.shape, dtype=object)
    for idx, v in np.ndenumerate(a):
        out[idx] = GaussianRational.coerce(v)
    return out


def ctranspose(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    if a.dtype == object:
        out = np.empty((a.shape[1], a.shape[0]), dtype=object)
        for (i, j), v in np.ndenumerate(a):
            out[j, i] = v.conjugate()
        return out
    return a.conj().T


def max_abs(a: np.ndarray) -> float:
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    if a.dtype == object:
        return max(abs(v) for v in a.flat)
    return float(np.max(np.abs(a)))


def equal(a: np.ndarray, b: np.ndarray) -> bool:
    """Exact entrywise equality (shape included)."""
    a, b = np.asarray(a), np.asarray(b)
    return a.shape == b.shape and all(x == y for x, y in zip(a.flat, b.flat))


def _row_reduce(a: np.ndarray, rhs: np.ndarray | None = None, full: bool = False):
    """Fraction Gaussian elimination on a copy of ``a``.

    Returns ``(R, rhs, pivots, sign)``. With ``full=True`` the result is
    the reduced row echelon form.
    """
    R = np.array(a, dtype=object, copy=True)
    X = None if rhs is None else np.array(rhs, dtype=object, copy=True)
    nrows, ncols = R.shape
    pivots: list[int] = []
    sign = 1
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        piv = next((i for i in range(r, nrows) if R[i, c]), None)
        if piv is None:
            continue
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
            if X is not None:
                X[[r, piv]] = X[[piv, r]]
            sign = -sign
        inv_p = GaussianRational.coerce(R[r, c]).inverse()
        if full:
            R[r] = R[r] * inv_p
            if X is not None:
                X[r] = X[r] * inv_p
            rows = [i for i in range(nrows) if i != r]
        else:
            rows = range(r + 1, nrows)
        for i in rows:
            if R[i, c]:
                f = R[i, c] if full else R[i, c] * inv_p
                R[i] = R[i] - f * R[r]
                if X is not None:
                    X[i] = X[i] - f * X[r]
        pivots.append(c)
        r += 1
    return R, X, pivots, sign


def det(a: np.ndarray):
    a = np.asarray(a)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("det needs a square matrix")
    if a.dtype != object:
        return complex(np.linalg.det(a)) if n else 1.0 + 0j
    if n == 0:
        return ONE
    R, _, pivots, sign = _row_reduce(a)
    if len(pivots) < n:
        return ZERO
    out = GR(sign)
    for i in range(n):
        out = out * R[i, i]
    return out


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = np.asarray(a), np.asarray(b)
    if a.dtype != object:
        return np.linalg.solve(a, b)
    n = a.shape[0]
    if n == 0:
        return np.empty((0,) + b.shape[1:], dtype=object)
    R, X, pivots, _ = _row_reduce(a, b, full=True)
    if len(pivots) < n:
        raise np.linalg.LinAlgError("singular matrix")
    return normalize(X, True)


def inv(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    if a.dtype != object:
        return np.linalg.inv(a)
    return solve(a, eye(a.shape[0]))


def rank(a: np.ndarray, rtol: float = 1e-8) -> int:
    """Exact rank for object arrays; otherwise count of singular values > rtol*s_max."""
    a = np.asarray(a)
    if a.size == 0:
        return 0
    if a.dtype == object:
        return len(_row_reduce(a)[2])
    s = np.linalg.svd(a, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def pivot_columns(a: np.ndarray, rtol: float = 1e-8) -> list[int]:
    """Indices of a maximal set of linearly independent columns."""
    a = np.asarray(a)
    if a.size == 0:
        return []
    if a.dtype == object:
        return _row_reduce(a)[2]
    # QR with column pivoting picks well-conditioned columns
    _, r, perm = scipy.linalg.qr(a, pivoting=True, mode="economic")
    d = np.abs(np.diag(r))
    if d.size == 0 or d[0] == 0:
        return []
    k = int(np.sum(d > rtol * d[0]))
    return sorted(perm[:k].tolist())


def matrix_power(a: np.ndarray, k: int) -> np.ndarray:
    a = np.asarray(a)
    exact = a.dtype == object
    if k < 0:
        a, k = inv(a), -k
    if not exact:
        return np.linalg.matrix_power(a, k)
    result = eye(a.shape[0])
    base = a
    while k:
        if k & 1:
            result = result @ base
        base = base @ base
        k >>= 1
    return result


def charpoly_reversed(a: np.ndarray) -> list:
    """Coefficients ``[c0, ..., cn]`` with ``det(I - tA) = sum c_k t^k`` (``c0 = 1``)."""
    a = np.asarray(a)
    n = a.shape[0]
    if a.dtype != object:
        return list(np.poly(a).astype(complex)) if n else [1.0 + 0j]
    # Faddeev-LeVerrier: det(sI - A) = s^n + c1 s^(n-1) + ... + cn
    coeffs = [ONE]
    M = zeros((n, n))
    ident = eye(n)
    for k in range(1, n + 1):
        M = a @ M + coeffs[-1] * ident if k > 1 else ident.copy()
        AM = a @ M
        trace = sum((AM[i, i] for i in range(n)), ZERO)
        coeffs.append(-trace / k)
    return coeffs


def ldl_min_pivot(h: np.ndarray) -> tuple[bool, Fraction]:
    """Exact PSD test of a Hermitian Gaussian-rational matrix by pivoted LDL*.

    Returns ``(is_psd, smallest_pivot)``. Pivoting takes the largest
    remaining diagonal entry; a zero diagonal with a nonzero off-diagonal
    entry in its row proves indefiniteness.
    """
    H = np.array(h, dtype=object, copy=True)
    n = H.shape[0]
    remaining = list(range(n))
    min_pivot: Fraction | None = None
    while remaining:
        diag = [(GaussianRational.coerce(H[i, i]).re, i) for i in remaining]
        d, p = max(diag)
        if d < 0:
            return False, d
        if d == 0:
            for i in remaining:
                if any(H[i, j] for j in remaining):
                    return False, Fraction(0)
            return True, Fraction(0) if min_pivot is None else min(min_pivot, Fraction(0))
        min_pivot = d if min_pivot is None else min(min_pivot, d)
        remaining.remove(p)
        col = {i: H[i, p] for i in remaining}
        for i in remaining:
            if not col[i]:
                continue
            for j in remaining:
                if col[j]:
                    H[i, j] = H[i, j] - col[i] * col[j].conjugate() / d
    return True, Fraction(0) if min_pivot is None else min_pivot

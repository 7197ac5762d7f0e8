"""Pure-Python reference versions of the inner loops in ``_ckernels.pyx``.

Both modules expose the same four functions; :mod:`dalat.kernels` picks
the compiled one when it imports.
"""
import numpy as np

IMPLEMENTATION = "python"


def basis_row_exact(x, y, N):
    """Scaled basis values ``G[n] = 2**n * z^(n)`` for ``z = x + iy``, ``n = 0..N``.

    With ``lam = 2 mu`` the generating function becomes
    ``(1+2mu)^x (1+(1+i)mu)^y (1+(1-i)mu)^(-y)``, whose Taylor
    coefficients are Gaussian integers. Returned as two lists of ints.
    """
    if y >= 0:
        nr, ni, dr, di = 1, 1, 1, -1
    else:
        nr, ni, dr, di = 1, -1, 1, 1
    re = [0] * (N + 1)
    im = [0] * (N + 1)
    re[0] = 1
    deg = 0
    # numerator: x factors (1+2mu), |y| factors (1+c mu)
    for _ in range(x):
        deg = min(deg + 1, N)
        for k in range(deg, 0, -1):
            re[k] += 2 * re[k - 1]
            im[k] += 2 * im[k - 1]
    for _ in range(abs(y)):
        deg = min(deg + 1, N)
        for k in range(deg, 0, -1):
            pr, pi = re[k - 1], im[k - 1]
            re[k] += nr * pr - ni * pi
            im[k] += nr * pi + ni * pr
    # |y| power-series divisions by (1 + d mu): q[k] = p[k] - d q[k-1]
    for _ in range(abs(y)):
        for k in range(1, N + 1):
            pr, pi = re[k - 1], im[k - 1]
            re[k] -= dr * pr - di * pi
            im[k] -= dr * pi + di * pr
    return re, im


def basis_row_float(x, y, N):
    """``z^(n)`` for ``n = 0..N`` in complex double."""
    if y >= 0:
        cn, cd = 0.5 + 0.5j, 0.5 - 0.5j
    else:
        cn, cd = 0.5 - 0.5j, 0.5 + 0.5j
    row = [0j] * (N + 1)
    row[0] = 1 + 0j
    deg = 0
    for _ in range(x):
        deg = min(deg + 1, N)
        for k in range(deg, 0, -1):
            row[k] += row[k - 1]
    for _ in range(abs(y)):
        deg = min(deg + 1, N)
        for k in range(deg, 0, -1):
            row[k] += cn * row[k - 1]
    for _ in range(abs(y)):
        for k in range(1, N + 1):
            row[k] -= cd * row[k - 1]
    return np.array(row, dtype=complex)


def ferrand_residual(values):
    """Max over cells of the lattice Cauchy-Riemann residual.

    ``values`` has shape ``(nx, ny, k)``; the cell at ``(i, j)`` uses the
    four corners ``(i, j)``, ``(i+1, j)``, ``(i, j+1)``, ``(i+1, j+1)``.
    """
    v = np.asarray(values, dtype=complex)
    if v.shape[0] < 2 or v.shape[1] < 2:
        return 0.0
    res = (v[1:, 1:] - v[:-1, :-1]) / (1 + 1j) - (v[1:, :-1] - v[:-1, 1:]) / (1 - 1j)
    return float(np.max(np.abs(res))) if res.size else 0.0


def shifted_sums(coeffs, basis, N):
    """``out[n] = sum_k coeffs[k] * basis[n + k]`` for ``n < N``.

    ``coeffs`` is ``(K, r)``; terms with ``n + k >= len(basis)`` are dropped.
    """
    c = np.asarray(coeffs, dtype=complex)
    b = np.asarray(basis, dtype=complex)
    K, r = c.shape
    out = np.zeros((N, r), dtype=complex)
    L = b.shape[0]
    for n in range(N):
        kmax = min(K, L - n)
        if kmax <= 0:
            break
        out[n] = b[n:n + kmax] @ c[:kmax]
    return out

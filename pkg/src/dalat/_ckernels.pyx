# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops; same contract as ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

IMPLEMENTATION = "cython"

cnp.import_array()


def basis_row_exact(long x, long y, long N):
    cdef long nr, ni, dr, di, deg, k, t, ay
    cdef object pr, pi
    cdef list re, im
    if y >= 0:
        nr, ni, dr, di = 1, 1, 1, -1
    else:
        nr, ni, dr, di = 1, -1, 1, 1
    ay = y if y >= 0 else -y
    re = [0] * (N + 1)
    im = [0] * (N + 1)
    re[0] = 1
    deg = 0
    for t in range(x):
        deg = deg + 1 if deg < N else N
        for k in range(deg, 0, -1):
            re[k] = re[k] + 2 * re[k - 1]
            im[k] = im[k] + 2 * im[k - 1]
    for t in range(ay):
        deg = deg + 1 if deg < N else N
        for k in range(deg, 0, -1):
            pr = re[k - 1]
            pi = im[k - 1]
            re[k] = re[k] + (nr * pr - ni * pi)
            im[k] = im[k] + (nr * pi + ni * pr)
    for t in range(ay):
        for k in range(1, N + 1):
            pr = re[k - 1]
            pi = im[k - 1]
            re[k] = re[k] - (dr * pr - di * pi)
            im[k] = im[k] - (dr * pi + di * pr)
    return re, im


def basis_row_float(long x, long y, long N):
    cdef double complex cn, cd
    cdef long deg, k, t, ay
    out = np.zeros(N + 1, dtype=np.complex128)
    cdef double complex[::1] row = out
    if y >= 0:
        cn = 0.5 + 0.5j
        cd = 0.5 - 0.5j
    else:
        cn = 0.5 - 0.5j
        cd = 0.5 + 0.5j
    ay = y if y >= 0 else -y
    row[0] = 1.0
    deg = 0
    for t in range(x):
        deg = deg + 1 if deg < N else N
        for k in range(deg, 0, -1):
            row[k] = row[k] + row[k - 1]
    for t in range(ay):
        deg = deg + 1 if deg < N else N
        for k in range(deg, 0, -1):
            row[k] = row[k] + cn * row[k - 1]
    for t in range(ay):
        for k in range(1, N + 1):
            row[k] = row[k] - cd * row[k - 1]
    return out


def ferrand_residual(values):
    v_arr = np.ascontiguousarray(values, dtype=np.complex128)
    cdef const double[:, :, ::1] v = v_arr.view(np.float64)
    cdef Py_ssize_t nx = v.shape[0], ny = v.shape[1], nk = v.shape[2] // 2
    cdef Py_ssize_t i, j, k
    cdef double pr, pi, mr, mi, ar, ai, br, bi, best = 0.0, mag
    # (p)/(1+i) - (m)/(1-i) = ((pr+pi) - (mr-mi) + i((pi-pr) - (mi+mr))) / 2
    for i in range(nx - 1):
        for j in range(ny - 1):
            for k in range(nk):
                pr = v[i + 1, j + 1, 2 * k] - v[i, j, 2 * k]
                pi = v[i + 1, j + 1, 2 * k + 1] - v[i, j, 2 * k + 1]
                mr = v[i + 1, j, 2 * k] - v[i, j + 1, 2 * k]
                mi = v[i + 1, j, 2 * k + 1] - v[i, j + 1, 2 * k + 1]
                ar = (pr + pi) - (mr - mi)
                ai = (pi - pr) - (mi + mr)
                mag = ar * ar + ai * ai
                if mag > best:
                    best = mag
    return sqrt(best) / 2


def shifted_sums(coeffs, basis, long N):
    c_arr = np.ascontiguousarray(coeffs, dtype=np.complex128)
    b_arr = np.ascontiguousarray(basis, dtype=np.complex128)
    cdef const double[:, ::1] c = c_arr.view(np.float64)
    cdef const double[::1] b = b_arr.view(np.float64)
    cdef Py_ssize_t K = c.shape[0], r = c.shape[1] // 2, L = b.shape[0] // 2
    out_arr = np.zeros((N, r), dtype=np.complex128)
    cdef double[:, ::1] out = out_arr.view(np.float64)
    cdef Py_ssize_t n, k, j, kmax
    cdef double br, bi, cr, ci, sr, si
    for n in range(N):
        kmax = L - n
        if kmax > K:
            kmax = K
        if kmax <= 0:
            break
        for j in range(r):
            sr = 0.0
            si = 0.0
            for k in range(kmax):
                br = b[2 * (n + k)]
                bi = b[2 * (n + k) + 1]
                cr = c[k, 2 * j]
                ci = c[k, 2 * j + 1]
                sr += br * cr - bi * ci
                si += br * ci + bi * cr
            out[n, 2 * j] = sr
            out[n, 2 * j + 1] = si
    return out_arr

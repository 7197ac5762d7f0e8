"""Basis polynomials ``z^(n)``, eigenfunctions ``e_lambda`` and coefficient series.

``z^(n)`` is the ``n``-th Taylor coefficient in ``lam`` of

    e_lam(z) = (1 + lam)^x ((1 + a+ lam) / (1 + a- lam))^y,   z = x + iy,

computed by polynomial multiplication followed by truncated power-series
division. Exact values are Gaussian rationals with power-of-two
denominators.
"""
from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import kernels
from .lattice import (
    LatticeFunction,
    LatticePoint,
    Window,
    WindowError,
    antiderivative_table,
    apply_difference,
)
from .linalg import normalize, zeros
from .scalar import (
    GR,
    GaussianRational,
    ModeError,
    alpha_minus,
    alpha_plus,
    as_matrix,
    as_scalar,
    format_fraction,
    scalar_mode,
)

__all__ = [
    "DEFAULT_TERMS",
    "CoefficientSeries",
    "SeriesDivergenceWarning",
    "basis_row",
    "basis_poly",
    "basis_table",
    "basis_csv",
    "e_lambda",
    "e_lambda_table",
    "mu_to_lambda",
    "e_minus_one",
    "z_apply",
    "taylor_coefficients",
    "series_eval",
    "series_table",
    "partial_sums_diverge",
    "convolve",
    "h2_norm",
    "h2_norm_squared",
]

DEFAULT_TERMS = 256   # truncation used when no length is given


class SeriesDivergenceWarning(RuntimeWarning):
    """Partial sums of a basis expansion are growing instead of settling."""


@lru_cache(maxsize=4096)
def _exact_row(x: int, y: int, N: int) -> tuple:
    re, im = kernels.basis_row_exact(x, y, N)
    out = []
    for n in range(N + 1):
        d = 1 << n
        out.append(GR(Fraction(re[n], d), Fraction(im[n], d)))
    return tuple(out)


def basis_row(z, N: int, exact: bool = True):
    """``[z^(0), ..., z^(N)]`` at one lattice point.

    Exact mode returns a tuple of :class:`GaussianRational`; float mode a
    ``complex128`` array.
    """
    z = LatticePoint.coerce(z)
    if z.x < 0:
        raise ValueError(f"{z} is not in the right half-lattice")
    if N < 0:
        raise ValueError("N must be nonnegative")
    if exact:
        return _exact_row(z.x, z.y, N)
    return kernels.basis_row_float(z.x, z.y, N)


def basis_poly(n: int, z, exact: bool = True):
    """Value of the basis polynomial ``z^(n)`` at a point of the half-lattice."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return basis_row(z, n, exact)[n]


def basis_table(n: int, window: Window, exact: bool = True) -> LatticeFunction:
    return LatticeFunction.tabulate(lambda z: basis_poly(n, z, exact), window, exact=exact)


def basis_csv(nmax: int, window: Window, exact: bool = True) -> str:
    """CSV with columns ``x, y, n, re, im`` for ``n = 0..nmax``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y", "n", "re", "im"])
    for z in window.points():
        row = basis_row(z, nmax, exact)
        for n in range(nmax + 1):
            v = row[n]
            if exact:
                w.writerow([z.x, z.y, n, format_fraction(v.re), format_fraction(v.im)])
            else:
                w.writerow([z.x, z.y, n, repr(float(v.real)), repr(float(v.imag))])
    return buf.getvalue()


# eigenfunctions ----------------------------------------------------------

def _is_exact_scalar(v) -> bool:
    return scalar_mode(v) == "exact"


def e_lambda(lam, z):
    """Joint eigenfunction ``e_lam(z)``; exact if ``lam`` is exact.

    Raises ``ValueError`` when a denominator of the formula vanishes
    (``lam = -2 a+`` always, ``lam = -2 a-`` for ``Im z < 0``).
    """
    z = LatticePoint.coerce(z)
    exact = _is_exact_scalar(lam)
    lam = as_scalar(lam, exact)
    ap, am = alpha_plus(exact), alpha_minus(exact)
    num = 1 + ap * lam
    den = 1 + am * lam
    if den == 0:
        raise ValueError("e_lambda undefined: 1 + a- lam = 0 (lam = -2 a+)")
    if z.y < 0 and num == 0:
        raise ValueError("e_lambda undefined below the real axis: 1 + a+ lam = 0 (lam = -2 a-)")
    a = (1 + lam) ** z.x
    if z.y >= 0:
        return a * num ** z.y / den ** z.y
    return a * den ** (-z.y) / num ** (-z.y)


def e_lambda_table(lam, window: Window) -> LatticeFunction:
    exact = _is_exact_scalar(lam)
    return LatticeFunction.tabulate(lambda z: e_lambda(lam, z), window, exact=exact)


def mu_to_lambda(mu):
    """``delta_x`` eigenvalue whose eigenfunction has ``delta_y`` eigenvalue ``mu``."""
    exact = _is_exact_scalar(mu)
    mu = as_scalar(mu, exact)
    den = 1 + alpha_plus(exact) * mu
    if den == 0:
        raise ValueError("mu = -2 a- is not a delta_y eigenvalue")
    i = GR(0, 1) if exact else 1j
    return -i * mu / den


def e_minus_one(z):
    """Eigenfunction of ``delta_x`` for the eigenvalue ``-1`` on the half-lattice."""
    z = LatticePoint.coerce(z)
    if z.x < 0:
        raise ValueError(f"{z} is not in the right half-lattice")
    if z.x > 0:
        return GR(0)
    return GR(0, -1) ** z.y


# the Z operator -------------------------------------------------------------

def z_apply(f: LatticeFunction) -> LatticeFunction:
    """Forward shift ``(Zf)(z) = (f(0) - f(z))/2 + int_0^z f dz`` on the same window."""
    w = f.window
    if not w.contains(LatticePoint(0, 0)):
        raise WindowError(f"origin outside window {w}")
    half = GR(Fraction(1, 2)) if f.exact else 0.5
    F = antiderivative_table(f)
    f0 = f(LatticePoint(0, 0))
    return LatticeFunction(w, (f0[None, None] - f.values) * half + F.values)


# coefficient series -----------------------------------------------------------

@dataclass(frozen=True)
class CoefficientSeries:
    """Finite sequence of matrix coefficients ``c(0..N)`` of ``sum c(n) z^(n)``.

    ``coeffs`` has shape ``(N+1, rows, cols)``.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs)
        if c.ndim == 1:
            c = c.reshape(-1, 1, 1)
        if c.ndim != 3 or c.shape[0] == 0:
            raise ValueError("coefficient array must have shape (N+1, rows, cols) with N >= 0")
        exact = c.dtype == object
        c = normalize(c, exact) if exact else c.astype(complex)
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def scalar(cls, values, exact: bool = True) -> "CoefficientSeries":
        if exact:
            arr = np.array([as_scalar(v, True) for v in values], dtype=object)
        else:
            arr = np.array([complex(v) for v in values], dtype=complex)
        return cls(arr.reshape(-1, 1, 1))

    @classmethod
    def from_matrices(cls, mats, exact: bool = True) -> "CoefficientSeries":
        arrs = [as_matrix(m, exact) for m in mats]
        return cls(np.stack(arrs))

    @property
    def exact(self) -> bool:
        return self.coeffs.dtype == object

    @property
    def N(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def rows(self) -> int:
        return self.coeffs.shape[1]

    @property
    def cols(self) -> int:
        return self.coeffs.shape[2]

    def __len__(self) -> int:
        return self.coeffs.shape[0]

    def __getitem__(self, n: int) -> np.ndarray:
        return self.coeffs[n]

    def backward_shift(self) -> "CoefficientSeries":
        """Coefficients of ``delta_x f``."""
        if self.N == 0:
            return CoefficientSeries(zeros((1, self.rows, self.cols), self.exact))
        return CoefficientSeries(self.coeffs[1:])

    def forward_shift(self, k: int = 1) -> "CoefficientSeries":
        """Coefficients of ``Z^k f``."""
        pad = zeros((k, self.rows, self.cols), self.exact)
        return CoefficientSeries(np.concatenate([pad, self.coeffs]))

    def trimmed(self) -> "CoefficientSeries":
        """Drop trailing zero coefficients (keeps at least one)."""
        n = self.coeffs.shape[0]
        while n > 1 and not any(self.coeffs[n - 1].flat):
            n -= 1
        return CoefficientSeries(self.coeffs[:n])

    def equals(self, other: "CoefficientSeries") -> bool:
        a, b = self.trimmed().coeffs, other.trimmed().coeffs
        return a.shape == b.shape and all(x == y for x, y in zip(a.flat, b.flat))

    def to_json(self) -> dict:
        if self.exact:
            coeffs = [[[[format_fraction(v.re), format_fraction(v.im)] for v in row] for row in m]
                      for m in self.coeffs]
        else:
            coeffs = [[[[float(v.real), float(v.imag)] for v in row] for row in m]
                      for m in self.coeffs]
        return {"rows": self.rows, "cols": self.cols, "terms": len(self.coeffs),
                "mode": "exact" if self.exact else "float", "coeffs": coeffs}

    @classmethod
    def from_json(cls, doc: dict) -> "CoefficientSeries":
        exact = doc.get("mode", "exact") == "exact"
        mats = []
        for m in doc["coeffs"]:
            if exact:
                mats.append([[GR(Fraction(str(re)), Fraction(str(im))) for re, im in row] for row in m])
            else:
                mats.append([[complex(re, im) for re, im in row] for row in m])
        arr = np.array(mats, dtype=object if exact else complex)
        arr = arr.reshape(len(mats), int(doc["rows"]), int(doc["cols"]))
        return cls(arr)


def taylor_coefficients(f: LatticeFunction, N: int) -> CoefficientSeries:
    """``c(n) = (delta_x^n f)(0)`` for ``n = 0..N``; needs ``[0..N]`` on the real axis."""
    w = f.window
    if not (w.x0 == 0 and w.x1 >= N and w.y0 <= 0 <= w.y1):
        raise WindowError(f"window {w} must contain the real segment [0..{N}]")
    row = f.values[: N + 1, -w.y0]
    out = [row[0]]
    cur = row
    for _ in range(N):
        cur = cur[1:] - cur[:-1]
        out.append(cur[0])
    return CoefficientSeries(np.stack(out))


def partial_sums_diverge(increment_norms, window: int = 10) -> bool:
    """True if the last ``window`` increment norms are nonzero and non-decreasing."""
    tail = list(increment_norms)[-window:]
    if len(tail) < window or tail[-1] == 0:
        return False
    return all(b >= a * (1 - 1e-12) for a, b in zip(tail, tail[1:]))


def series_eval(c: CoefficientSeries, z, warn: bool = True) -> np.ndarray:
    """Partial sum ``sum_{n<=N} c(n) z^(n)``.

    Emits :class:`SeriesDivergenceWarning` when the last ten increments
    grow monotonically (the series is outside its convergence region).
    """
    z = LatticePoint.coerce(z)
    row = basis_row(z, c.N, c.exact)
    if c.exact:
        total = zeros((c.rows, c.cols))
        for n in range(c.N + 1):
            if row[n]:
                total = total + c.coeffs[n] * row[n]
        return total
    terms = c.coeffs * row[:, None, None]
    if warn and c.N >= 10:
        norms = np.max(np.abs(terms.reshape(len(row), -1)), axis=1)
        if partial_sums_diverge(norms):
            warnings.warn(f"partial sums at {z} grow over the last 10 terms",
                          SeriesDivergenceWarning, stacklevel=2)
    return terms.sum(axis=0)


def series_table(c: CoefficientSeries, window: Window) -> LatticeFunction:
    return LatticeFunction.tabulate(lambda z: series_eval(c, z, warn=False), window, exact=c.exact)


def convolve(a: CoefficientSeries, b: CoefficientSeries, length: int | None = None) -> CoefficientSeries:
    """Cauchy product ``(a * b)(n) = sum_{m<=n} a(m) b(n-m)``.

    The result has ``min(Na + Nb, length - 1) + 1`` coefficients.
    """
    if a.cols != b.rows:
        raise ValueError(f"shape mismatch: {a.rows}x{a.cols} times {b.rows}x{b.cols}")
    if a.exact != b.exact:
        raise ModeError("mixed scalar modes in convolve")
    n_out = a.N + b.N + 1
    if length is not None:
        n_out = min(n_out, length)
    out = zeros((n_out, a.rows, b.cols), a.exact)
    for i in range(min(a.N + 1, n_out)):
        ai = a.coeffs[i]
        if not any(ai.flat):
            continue
        for j in range(min(b.N + 1, n_out - i)):
            out[i + j] = out[i + j] + ai @ b.coeffs[j]
    return CoefficientSeries(out)


def h2_norm_squared(c: CoefficientSeries):
    """``sum ||c(n)||_F^2``; a ``Fraction`` in exact mode."""
    if c.exact:
        return sum((v.abs2() for v in c.coeffs.flat), Fraction(0))
    return float(np.sum(np.abs(c.coeffs) ** 2))


def h2_norm(c: CoefficientSeries) -> float:
    return float(h2_norm_squared(c)) ** 0.5

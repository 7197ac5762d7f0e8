"""Rational discrete analytic functions through state-space realizations.

A realization ``(A, B, C, D)`` stands for

    f(z) = D + C (I - zA)^{-o} o (zB),    (I - zA)^{-o} = e_A(z),

with ``e_A(z) = (I+A)^x (I + a+ A)^y (I + a- A)^{-y}``. It is admissible
when neither ``I + a+ A`` nor ``I + a- A`` is singular. The T-map sends
it to the classical transfer function ``D + t C (I - tA)^{-1} B``; both
sides share the Markov parameters ``D, CB, CAB, ...``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg as la
from .basis import DEFAULT_TERMS, CoefficientSeries, convolve, taylor_coefficients, z_apply
from .lattice import LatticeFunction, LatticePoint, Window, WindowError, apply_difference
from .scalar import (
    GR,
    GaussianRational,
    ModeError,
    alpha_minus,
    alpha_plus,
    as_matrix,
    as_scalar,
    format_fraction,
    to_complex_array,
)

__all__ = [
    "Realization",
    "InadmissibleError",
    "InsufficientDataError",
    "check_admissible",
    "resolvent_eval",
    "resolvent_table",
    "rational_eval",
    "rational_eval_closed",
    "rational_table",
    "markov_params",
    "transfer_eval",
    "realize_transfer",
    "combine",
    "invert",
    "minimal_realization",
    "mcmillan_degree",
    "kernel_realization",
    "annihilating_polynomial",
    "backward_shift_rank",
    "FLOAT_RTOL",
    "HANKEL_RTOL",
]

FLOAT_RTOL = 1e-9
HANKEL_RTOL = 1e-8


class InadmissibleError(ValueError):
    """``-2 a+`` or ``-2 a-`` is an eigenvalue of the state matrix."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class InsufficientDataError(ValueError):
    """Too few Markov parameters to pin down a minimal realization."""


@dataclass(frozen=True, eq=False)
class Realization:
    """State-space quadruple; ``A`` is n x n, ``B`` n x p, ``C`` m x n, ``D`` m x p."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    exact: bool = field(default=True)

    def __post_init__(self):
        mats = [np.asarray(getattr(self, k)) for k in "ABCD"]
        exact = self.exact
        fixed = []
        for name, m in zip("ABCD", mats):
            if m.ndim != 2:
                raise ValueError(f"{name} must be a 2-D matrix")
            if m.size:
                mode = la.is_exact(m)
                if mode != exact:
                    raise ModeError(f"{name} is {'exact' if mode else 'float'} but realization is "
                                    f"{'exact' if exact else 'float'}")
            fixed.append(la.normalize(m, exact))
        A, B, C, D = fixed
        n = A.shape[0]
        if A.shape != (n, n):
            raise ValueError("A must be square")
        m, p = D.shape
        if B.shape != (n, p) or C.shape != (m, n):
            raise ValueError(f"inconsistent shapes A{A.shape} B{B.shape} C{C.shape} D{D.shape}")
        for name, v in zip("ABCD", (A, B, C, D)):
            v.flags.writeable = False
            object.__setattr__(self, name, v)

    @classmethod
    def from_lists(cls, A, B, C, D, exact: bool = True) -> "Realization":
        def mat(v, shape=None):
            arr = np.array(v, dtype=object if exact else complex)
            if shape is not None and arr.size == 0:
                arr = arr.reshape(shape)
            return as_matrix(arr, exact) if arr.size else la.zeros(arr.shape if arr.ndim == 2 else shape, exact)

        Dm = as_matrix(D, exact)
        m, p = Dm.shape
        An = np.array(A, dtype=object)
        n = An.shape[0] if An.size else 0
        return cls(mat(A, (n, n)), mat(B, (n, p)), mat(C, (m, n)), Dm, exact)

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
    def mode(self) -> str:
        return "exact" if self.exact else "float"

    def equals(self, other: "Realization") -> bool:
        """Same mode and identical matrices (not similarity)."""
        return self.exact == other.exact and all(
            la.equal(getattr(self, k), getattr(other, k)) for k in "ABCD")

    @property
    def admissible(self) -> bool:
        return check_admissible(self.A)[0]

    def to_float(self) -> "Realization":
        return Realization(*(to_complex_array(getattr(self, k)) for k in "ABCD"), exact=False)

    def to_json(self) -> dict:
        def enc(mat):
            if self.exact:
                return [[[format_fraction(v.re), format_fraction(v.im)] for v in row] for row in mat]
            return [[[float(v.real), float(v.imag)] for v in row] for row in mat]

        return {"n": self.n, "m": self.m, "p": self.p, "mode": self.mode,
                "A": enc(self.A), "B": enc(self.B), "C": enc(self.C), "D": enc(self.D)}

    @classmethod
    def from_json(cls, doc: dict) -> "Realization":
        exact = doc.get("mode", "exact") == "exact"
        n, m, p = int(doc["n"]), int(doc["m"]), int(doc["p"])

        def dec(name, shape):
            rows = doc[name]
            out = la.zeros(shape, exact)
            for i, row in enumerate(rows):
                for j, v in enumerate(row):
                    out[i, j] = _decode_entry(v, exact)
            return out

        return cls(dec("A", (n, n)), dec("B", (n, p)), dec("C", (m, n)), dec("D", (m, p)), exact)


def _decode_entry(v, exact: bool):
    """JSON entry: ``[re, im]`` pair, a number, or a scalar string like ``"1/2-i"``."""
    if isinstance(v, (list, tuple)):
        re, im = v
        if exact:
            return GR(Fraction(str(re)), Fraction(str(im)))
        return complex(float(Fraction(str(re))) if isinstance(re, str) else re,
                       float(Fraction(str(im))) if isinstance(im, str) else im)
    if isinstance(v, str):
        return as_scalar(v, exact)
    if exact:
        if isinstance(v, float):
            raise ModeError("float literal in an exact-mode document; use a 'p/q' string")
        return GR(v)
    return complex(v)


# admissibility and the resolvent -----------------------------------------------

def check_admissible(A: np.ndarray, tol: float = 1e-12) -> tuple[bool, str | None]:
    """Whether ``I + a+ A`` and ``I + a- A`` are both invertible.

    Exact matrices use exact determinants; float matrices require the
    smallest singular value of each factor to exceed ``tol``. The witness
    names the singular factor.
    """
    A = np.asarray(A)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("A must be square")
    if n == 0:
        return True, None
    exact = la.is_exact(A)
    I = la.eye(n, exact)
    for name, a in (("I + a+ A", alpha_plus(exact)), ("I + a- A", alpha_minus(exact))):
        M = I + A * a
        if exact:
            if la.det(M) == 0:
                return False, name
        else:
            s = np.linalg.svd(M, compute_uv=False)
            if s[-1] <= tol:
                return False, name
    return True, None


def _require_admissible(A: np.ndarray):
    ok, witness = check_admissible(A)
    if not ok:
        raise InadmissibleError(f"state matrix is inadmissible: {witness} is singular", witness)


def _step_matrices(A: np.ndarray):
    exact = la.is_exact(A)
    n = A.shape[0]
    I = la.eye(n, exact)
    P = I + A * alpha_plus(exact)
    M = I + A * alpha_minus(exact)
    up = P @ la.inv(M)
    down = M @ la.inv(P)
    return I + A, up, down


def resolvent_eval(A: np.ndarray, z) -> np.ndarray:
    """``e_A(z) = (I+A)^x (I + a+ A)^y (I + a- A)^{-y}``; ``y`` may be negative."""
    A = np.asarray(A)
    z = LatticePoint.coerce(z)
    if z.x < 0:
        raise ValueError(f"{z} is not in the right half-lattice")
    _require_admissible(A)
    right, up, down = _step_matrices(A)
    out = la.matrix_power(right, z.x)
    vert = la.matrix_power(up if z.y >= 0 else down, abs(z.y))
    return out @ vert


def resolvent_table(A: np.ndarray, window: Window) -> LatticeFunction:
    """``e_A`` on a window, by repeated one-step multiplication."""
    A = np.asarray(A)
    _require_admissible(A)
    exact = la.is_exact(A) if A.size else A.dtype == object
    right, up, down = _step_matrices(A)
    n = A.shape[0]
    nx, ny = window.shape
    values = np.empty((nx, ny, n, n), dtype=object if exact else complex)
    start = resolvent_eval(A, LatticePoint(window.x0, window.y0))
    col = start
    for i in range(nx):
        cur = col
        values[i, 0] = cur
        for j in range(1, ny):
            cur = up @ cur
            values[i, j] = cur
        col = right @ col
    return LatticeFunction(window, values)


def _origin_window(*points: LatticePoint) -> Window:
    pts = [LatticePoint(0, 0)] + [LatticePoint.coerce(p) for p in points]
    return Window(0, max(p.x for p in pts), min(p.y for p in pts), max(p.y for p in pts))


def rational_table(R: Realization, window: Window) -> LatticeFunction:
    """Values of ``f = D + C Z(e_A B)`` on ``window``.

    ``Z`` is applied by discrete trapezoid integration from the origin
    over a window enlarged to contain 0.
    """
    _require_admissible(R.A)
    big = _origin_window(LatticePoint(window.x0, window.y0), LatticePoint(window.x1, window.y1))
    if R.n == 0:
        return LatticeFunction.constant(R.D, window, R.exact)
    g = resolvent_table(R.A, big).right_multiply(R.B)
    Zg = z_apply(g)
    f = Zg.left_multiply(R.C)
    vals = f.values + R.D[None, None]
    return LatticeFunction(big, vals).restrict(window)


def rational_eval(R: Realization, z) -> np.ndarray:
    """``f(z)`` through the lattice integral of ``e_A B``."""
    z = LatticePoint.coerce(z)
    return rational_table(R, Window(z.x, z.x, z.y, z.y))(z)


def rational_eval_closed(R: Realization, z) -> np.ndarray:
    """``D + C (e_A(z) - I) A^{-1} B``; needs invertible ``A`` (cross-check route)."""
    z = LatticePoint.coerce(z)
    if R.n == 0:
        return R.D.copy()
    E = resolvent_eval(R.A, z)
    I = la.eye(R.n, R.exact)
    return R.D + R.C @ (E - I) @ la.solve(R.A, R.B)


# Markov parameters and the T-map ----------------------------------------------

def markov_params(R: Realization, K: int = DEFAULT_TERMS - 1) -> CoefficientSeries:
    """``(D, CB, CAB, ..., CA^{K-1}B)`` as a coefficient series of length ``K+1``."""
    if K < 0:
        raise ValueError("K must be nonnegative")
    out = [R.D]
    v = R.B
    for _ in range(K):
        out.append(R.C @ v)
        v = R.A @ v
    return CoefficientSeries(np.stack([la.normalize(m, R.exact) for m in out]))


def transfer_eval(R: Realization, t) -> np.ndarray:
    """Classical transfer value ``D + t C (I - tA)^{-1} B``."""
    t = as_scalar(t, R.exact)
    if R.n == 0:
        return R.D.copy()
    I = la.eye(R.n, R.exact)
    M = I - R.A * t
    try:
        X = la.solve(M, R.B)
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"I - tA is singular at t = {t}") from exc
    if not R.exact and np.linalg.cond(M) > 1e14:
        raise ValueError(f"I - tA is numerically singular at t = {t}")
    return R.D + (R.C @ X) * t


def _poly_eval(coeffs, t):
    acc = coeffs[-1] * 0 if coeffs else 0
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def realize_transfer(num, den, exact: bool = True) -> Realization:
    """Controllable block-companion realization of ``num(t) / den(t)``.

    ``num`` is a list of ``m x p`` coefficient matrices (``num[k]``
    multiplies ``t^k``), ``den`` a list of scalars. The denominator must
    not vanish at ``0``, ``-a+`` or ``-a-``.
    """
    den = [as_scalar(d, exact) for d in den]
    while len(den) > 1 and den[-1] == 0:
        den.pop()
    nums = [as_matrix(c, exact) for c in num] if len(num) else [la.zeros((1, 1), exact)]
    m, p = nums[0].shape
    for pt, label in ((0, "0"), (-alpha_plus(exact), "-a+"), (-alpha_minus(exact), "-a-")):
        v = _poly_eval(den, pt)
        if (v == 0) if exact else abs(v) < 1e-14:
            raise InadmissibleError(f"denominator vanishes at t = {label}", label)
    d0 = den[0]
    den = [d / d0 for d in den]
    nums = [c / d0 for c in nums]
    r = max(len(den) - 1, len(nums) - 1)
    den = den + [den[0] * 0] * (r + 1 - len(den))
    nums = nums + [la.zeros((m, p), exact)] * (r + 1 - len(nums))
    D = nums[0]
    if r == 0:
        return Realization(la.zeros((0, 0), exact), la.zeros((0, p), exact),
                           la.zeros((m, 0), exact), D, exact)
    # num - D den = t q(t), deg q <= r - 1
    q = [nums[k + 1] - D * den[k + 1] for k in range(r)]
    n = r * p
    A = la.zeros((n, n), exact)
    Ip = la.eye(p, exact)
    for k in range(r):
        A[0:p, k * p:(k + 1) * p] = Ip * (-den[k + 1])
    for k in range(1, r):
        A[k * p:(k + 1) * p, (k - 1) * p:k * p] = Ip
    B = la.zeros((n, p), exact)
    B[0:p, :] = Ip
    C = np.concatenate(q, axis=1)
    return Realization(A, B, C, D, exact)


# algebra -----------------------------------------------------------------------

def _check_pair(R2: Realization, R1: Realization):
    if R2.exact != R1.exact:
        raise ModeError("mixed scalar modes in combine")


def combine(kind: str, R2: Realization, R1: Realization) -> Realization:
    """``f2 + f1`` (``kind="sum"``) or the cascade ``f2 o f1`` (``kind="product"``)."""
    _check_pair(R2, R1)
    _require_admissible(R1.A)
    _require_admissible(R2.A)
    exact = R1.exact
    n1, n2 = R1.n, R2.n
    if kind == "sum":
        if R1.D.shape != R2.D.shape:
            raise ValueError(f"shape mismatch in sum: {R1.D.shape} vs {R2.D.shape}")
        A = la.zeros((n1 + n2, n1 + n2), exact)
        A[:n1, :n1] = R1.A
        A[n1:, n1:] = R2.A
        B = np.concatenate([R1.B, R2.B], axis=0)
        C = np.concatenate([R1.C, R2.C], axis=1)
        return Realization(A, B, C, R1.D + R2.D, exact)
    if kind == "product":
        if R1.m != R2.p:
            raise ValueError(f"shape mismatch in product: f1 has {R1.m} outputs, f2 takes {R2.p}")
        A = la.zeros((n1 + n2, n1 + n2), exact)
        A[:n1, :n1] = R1.A
        A[n1:, :n1] = R2.B @ R1.C
        A[n1:, n1:] = R2.A
        B = np.concatenate([R1.B, R2.B @ R1.D], axis=0)
        C = np.concatenate([R2.D @ R1.C, R2.C], axis=1)
        return Realization(A, la.normalize(B, exact), la.normalize(C, exact), R2.D @ R1.D, exact)
    raise ValueError(f"unknown combine kind {kind!r}")


def invert(R: Realization) -> Realization:
    """Convolution inverse with state matrix ``A - B D^{-1} C``."""
    if R.m != R.p:
        raise ValueError("only square-valued functions can be inverted")
    exact = R.exact
    try:
        Dinv = la.inv(R.D)
    except (np.linalg.LinAlgError, ZeroDivisionError) as exc:
        raise ValueError("D is singular") from exc
    if not exact and np.linalg.cond(R.D) > 1e14:
        raise ValueError("D is numerically singular")
    Ax = R.A - R.B @ Dinv @ R.C
    ok, witness = check_admissible(Ax)
    if not ok:
        raise InadmissibleError(f"A - B D^-1 C is inadmissible: {witness} is singular", witness)
    return Realization(la.normalize(Ax, exact), la.normalize(R.B @ Dinv, exact),
                       la.normalize(-(Dinv @ R.C), exact), Dinv, exact)


# minimal realization ---------------------------------------------------------

def _hankel(h: list, rows: int, cols: int, shift: int) -> np.ndarray:
    return np.block([[h[i + j + 1 + shift] for j in range(cols)] for i in range(rows)])


def minimal_realization(M: CoefficientSeries, rtol: float = HANKEL_RTOL) -> tuple[Realization, int]:
    """Ho-Kalman realization from Markov parameters ``(D, h1, ..., hK)``.

    The McMillan degree is the Hankel rank: exact rank for exact data,
    otherwise the count of singular values above ``rtol * s_max``. Raises
    :class:`InsufficientDataError` when the rank has not stabilized.
    """
    exact = M.exact
    K = M.N
    h = [M.coeffs[k] for k in range(K + 1)]
    m, p = M.rows, M.cols
    D = la.normalize(h[0], exact)
    empty = Realization(la.zeros((0, 0), exact), la.zeros((0, p), exact),
                        la.zeros((m, 0), exact), D, exact)
    if K == 0:
        raise InsufficientDataError("need at least one Markov parameter beyond D")
    tail_zero = (not any(v for hk in h[1:] for v in hk.flat)) if exact else \
        max(np.abs(np.stack(h[1:])).ravel()) == 0
    if tail_zero:
        return empty, 0
    L = K // 2
    Lc = K - L
    if L == 0:
        raise InsufficientDataError("need at least two Markov parameters beyond D")
    H = _hankel(h, L, Lc, 0)
    Hs = _hankel(h, L, Lc, 1)
    r = la.rank(H, rtol)
    r_rows = la.rank(_hankel(h, L - 1, Lc, 0), rtol) if L > 1 else 0
    r_cols = la.rank(_hankel(h, L, Lc - 1, 0), rtol) if Lc > 1 else 0
    if r != r_rows or r != r_cols:
        raise InsufficientDataError(
            f"Hankel rank {r} has not stabilized with {K} Markov parameters; supply more")
    if r == 0:
        return empty, 0
    if exact:
        # pick r independent columns J and rows I; H[I, J] is then invertible
        J = la.pivot_columns(H)
        I_rows = la.pivot_columns(np.ascontiguousarray(H[:, J].T))
        H_IJ_inv = la.inv(H[np.ix_(I_rows, J)])
        A = Hs[np.ix_(I_rows, J)] @ H_IJ_inv
        B = H[np.ix_(I_rows, list(range(p)))]
        C = H[np.ix_(list(range(m)), J)] @ H_IJ_inv
        return Realization(la.normalize(A, True), la.normalize(B, True),
                           la.normalize(C, True), D, True), r
    U, s, Vh = np.linalg.svd(H.astype(complex))
    sq = np.sqrt(s[:r])
    O = U[:, :r] * sq
    Ctrb = sq[:, None] * Vh[:r]
    A = np.linalg.pinv(O) @ Hs.astype(complex) @ np.linalg.pinv(Ctrb)
    return Realization(A, Ctrb[:, :p], O[:m, :], D.astype(complex), False), r


def mcmillan_degree(R: Realization, extra: int = 2) -> int:
    """Hankel rank of ``R``'s Markov parameters (``2n + extra`` of them)."""
    M = markov_params(R, 2 * R.n + extra)
    return minimal_realization(M)[1]


def kernel_realization(w) -> Realization:
    """Realization of ``z -> K(z, w) = sum z^(n) conj(w^(n))``.

    Its T-image is ``t -> e_t(conj w) = (1+t)^x (1 + a- t)^y / (1 + a+ t)^y``
    for ``w = x + iy`` (numerator and denominator swap roles when ``y < 0``),
    realized in controllable companion form of dimension ``x + |y|``.
    """
    w = LatticePoint.coerce(w)
    if w.x < 0:
        raise ValueError(f"{w} is not in the right half-lattice")
    x, y = w.x, w.y
    up, dn = (alpha_minus(), alpha_plus()) if y >= 0 else (alpha_plus(), alpha_minus())
    num = [GR(1)]
    den = [GR(1)]

    def mul_linear(poly, c):
        out = list(poly) + [GR(0)]
        for k in range(len(poly)):
            out[k + 1] = out[k + 1] + poly[k] * c
        return out

    for _ in range(x):
        num = mul_linear(num, GR(1))
    for _ in range(abs(y)):
        num = mul_linear(num, up)
        den = mul_linear(den, dn)
    return realize_transfer([[[c]] for c in num], den, exact=True)


# annihilators and backward-shift rank --------------------------------------------

def annihilating_polynomial(R: Realization) -> CoefficientSeries:
    """Scalar polynomial ``p`` with ``T p = det(I - tA)``.

    ``p o f`` is then a discrete analytic polynomial of degree at most
    ``n``: its coefficients vanish from index ``n + 1`` on.
    """
    _require_admissible(R.A)
    coeffs = la.charpoly_reversed(R.A)
    return CoefficientSeries.scalar(coeffs, exact=R.exact)


def backward_shift_rank(f: LatticeFunction, kmax: int, tol: float = 1e-8) -> int:
    """Numerical dimension of ``span{delta_x f, ..., delta_x^kmax f}`` on the window.

    Each ``delta_x^k f`` is sampled on the window left after ``kmax``
    differences, vectorized and normalized; the rank counts singular
    values above ``tol * s_max`` (exact rank for exact tables).
    """
    nx = f.window.shape[0]
    if kmax < 1 or nx <= kmax:
        raise WindowError(f"window {f.window} too narrow for {kmax} differences")
    cols = []
    cur = f
    width = nx - kmax
    for _ in range(kmax):
        cur = apply_difference("dx", cur)
        cols.append(cur.values[:width].reshape(-1))
    mat = np.stack(cols, axis=1)
    if f.exact:
        return la.rank(mat)
    mat = mat.astype(complex)
    norms = np.linalg.norm(mat, axis=0)
    keep = norms > 0
    if not keep.any():
        return 0
    mat = mat[:, keep] / norms[keep]
    return la.rank(mat, tol)

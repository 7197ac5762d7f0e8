"""The mesh-``h`` lattice ``hZ + ihZ`` and its ``h -> 0`` limits.

Everything reduces to the unit lattice through index coordinates: a mesh
point ``z = h(j + ik)`` is stored as ``(j, k, h)`` and

    z_h^(n)(z) = h^n z^(n)(j + ik),
    delta_{x,h} = delta_x / h,     Z_h = h Z     (in index coordinates).

``h`` is kept rational so that tables stay exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


from .basis import basis_poly, basis_row, z_apply
from .lattice import LatticeFunction, LatticePoint, Window, apply_difference, is_discrete_analytic
from .scalar import GR, parse_scalar

__all__ = [
    "MeshError",
    "MeshPoint",
    "as_step",
    "basis_poly_h",
    "falling_product",
    "basis_table_h",
    "delta_xh",
    "z_h",
    "taylor_coefficients_h",
    "mesh_residual",
    "kernel_h",
    "limit_kernel",
    "adjoint_identity_check",
    "mesh_adjoint_check",
    "convergence_table",
    "convergence_csv",
]


class MeshError(ValueError):
    """A point is not on the requested mesh."""


def _rational(v) -> Fraction:
    if isinstance(v, str):
        return Fraction(v.strip())
    if isinstance(v, float):
        return Fraction(repr(v))
    return Fraction(v)


def as_step(h) -> Fraction:
    """Mesh size as a positive ``Fraction``; accepts ``"1/8"``, ints, floats."""
    q = _rational(h)
    if q <= 0:
        raise MeshError(f"mesh size must be positive, got {h}")
    return q


@dataclass(frozen=True)
class MeshPoint:
    """The point ``h (j + ik)``."""

    j: int
    k: int
    h: Fraction

    def __post_init__(self):
        object.__setattr__(self, "h", as_step(self.h))

    @classmethod
    def at(cls, z, h) -> "MeshPoint":
        """Mesh point with value ``z`` (``"1+i"``, complex, ``(x, y)`` or ``GR``)."""
        h = as_step(h)
        if isinstance(z, MeshPoint):
            z = z.value
        if isinstance(z, str):
            z = parse_scalar(z, exact=True)
        if isinstance(z, tuple):
            x, y = (_rational(v) for v in z)
        elif isinstance(z, GR):
            x, y = z.re, z.im
        elif isinstance(z, complex):
            x, y = _rational(z.real), _rational(z.imag)
        else:
            x, y = _rational(z), Fraction(0)
        j, k = x / h, y / h
        if j.denominator != 1 or k.denominator != 1:
            raise MeshError(f"{x}+{y}i is not on the mesh of size {h}")
        return cls(int(j), int(k), h)

    @property
    def index(self) -> LatticePoint:
        return LatticePoint(self.j, self.k)

    @property
    def value(self) -> GR:
        return GR(self.h * self.j, self.h * self.k)

    def __str__(self):
        return f"{self.h}*({self.index})"


def basis_poly_h(n: int, z, h=None, exact: bool = True):
    """``z_h^(n)(z) = h^n z^(n)(z / h)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if not isinstance(z, MeshPoint):
        if h is None:
            raise ValueError("mesh size required")
        z = MeshPoint.at(z, h)
    elif h is not None and as_step(h) != z.h:
        z = MeshPoint.at(z.value, h)
    if z.j < 0:
        raise MeshError(f"{z.value} is not in the right half-plane mesh")
    v = basis_poly(n, z.index, exact=True) * z.h ** n
    return v if exact else complex(v)


def falling_product(n: int, x, h) -> Fraction:
    """``x (x - h) ... (x - (n-1) h) / n!`` exactly."""
    x, h = Fraction(x), as_step(h)
    num = Fraction(1)
    for k in range(n):
        num *= x - k * h
    return num / math.factorial(n)


def basis_table_h(n: int, window: Window, h) -> LatticeFunction:
    """``z_h^(n)`` on a window given in index coordinates."""
    h = as_step(h)
    scale = h ** n
    return LatticeFunction.tabulate(
        lambda p: basis_poly(n, p, exact=True) * scale, window, exact=True)


def delta_xh(f: LatticeFunction, h) -> LatticeFunction:
    """``(f(z + h) - f(z)) / h`` (index-coordinate table)."""
    h = as_step(h)
    return apply_difference("dx", f).scale(GR(1 / h) if f.mode == "exact" else float(1 / h))


def z_h(f: LatticeFunction, h) -> LatticeFunction:
    """``(f(0) - f(z)) h / 2 + int_0^z f dz`` on the mesh: ``h`` times the unit ``Z``."""
    h = as_step(h)
    return z_apply(f).scale(GR(h) if f.mode == "exact" else float(h))


def taylor_coefficients_h(f: LatticeFunction, h, N: int) -> list:
    """``(delta_{x,h}^n f)(0)`` for ``n <= N`` (scalar tables)."""
    out = []
    cur = f
    for n in range(N + 1):
        out.append(cur.scalar_at(LatticePoint(0, 0)))
        if n < N:
            cur = delta_xh(cur, h)
    return out


def mesh_residual(f: LatticeFunction) -> tuple[bool, float]:
    """Discrete analyticity on the mesh.

    The defining quotient relation is homogeneous in ``h``, so the unit
    lattice residual of the index-coordinate table is the mesh residual.
    """
    return is_discrete_analytic(f)


def kernel_h(z, w, h, N: int, exact: bool = False):
    """``sum_{n<N} z_h^(n) conj(w_h^(n))`` and the modulus of its last term."""
    h = as_step(h)
    zp, wp = MeshPoint.at(z, h), MeshPoint.at(w, h)
    rz = basis_row(zp.index, N - 1, exact=True)
    rw = basis_row(wp.index, N - 1, exact=True)
    total = GR(0)
    term = GR(0)
    hn = Fraction(1)
    for n in range(N):
        term = rz[n] * rw[n].conjugate() * (hn * hn)
        total = total + term
        hn *= h
    tail = abs(complex(term))
    return (total if exact else complex(total)), tail


def limit_kernel(z, w, N: int) -> tuple[complex, float]:
    """``sum_{n<N} z^n conj(w)^n / (n!)^2`` and a bound on the omitted tail."""
    z, w = complex(z), complex(w)
    q = z * w.conjugate()
    total = 0j
    term = 1 + 0j
    for n in range(N):
        if n:
            term *= q / (n * n)
        total += term
    # remaining terms are dominated by a geometric series with ratio r
    nxt = abs(term) * abs(q) / (N * N)
    r = abs(q) / ((N + 1) ** 2)
    tail = nxt / (1 - r) if r < 1 else math.inf
    return total, tail


def _inner(a: list, b: list) -> Fraction:
    """``<sum a_k z^k, sum b_k z^k> = sum a_k conj(b_k) (k!)^2``; real coefficients."""
    return sum((Fraction(x) * Fraction(y) * math.factorial(k) ** 2
                for k, (x, y) in enumerate(zip(a, b))), Fraction(0))


def _monomial(n: int) -> list:
    return [0] * n + [1]


def adjoint_identity_check(n: int, m: int) -> tuple[Fraction, Fraction, bool]:
    """Compare ``<d/dz z^n, z^m>`` with ``<z^n, z^(m+1)/(m+1)>``.

    The inner product makes ``z^k / k!`` orthonormal; both sides are exact.
    """
    if n < 0 or m < 0:
        raise ValueError("n and m must be nonnegative")
    f = _monomial(n)
    df = [k * c for k, c in enumerate(f)][1:] or [0]
    g = _monomial(m)
    Zg = [0] + [Fraction(c, k + 1) for k, c in enumerate(g)]
    width = max(len(df), len(g), len(f), len(Zg))
    pad = lambda v: list(v) + [0] * (width - len(v))
    lhs = _inner(pad(df), pad(g))
    rhs = _inner(pad(f), pad(Zg))
    return lhs, rhs, lhs == rhs


def mesh_adjoint_check(a, b, h) -> tuple[GR, GR, bool]:
    """``<delta_{x,h} f, g>`` against ``<f, Z_h g>`` for finite mesh series.

    ``f = sum a_n z_h^(n)``, ``g = sum b_n z_h^(n)``, with the ``z_h^(n)``
    orthonormal. Both operators are applied to tables and the coefficients
    read back at the origin.
    """
    h = as_step(h)
    a = [GR.coerce(v) for v in a]
    b = [GR.coerce(v) for v in b]
    L = max(len(a), len(b)) + 1
    win = Window(0, L + 1, 0, 0)

    def table(coeffs):
        tabs = [basis_table_h(n, win, h).scale(c) for n, c in enumerate(coeffs) if c]
        out = LatticeFunction.constant([[0]], win, exact=True)
        for t in tabs:
            out = out + t
        return out

    f, g = table(a), table(b)
    df = taylor_coefficients_h(delta_xh(f, h), h, L)
    zg = taylor_coefficients_h(z_h(g, h), h, L)
    fa = taylor_coefficients_h(f, h, L)
    gb = taylor_coefficients_h(g, h, L)
    lhs = sum((x * y.conjugate() for x, y in zip(df, gb)), GR(0))
    rhs = sum((x * y.conjugate() for x, y in zip(fa, zg)), GR(0))
    return lhs, rhs, lhs == rhs


def convergence_table(n: int, x, h_list) -> list[tuple[Fraction, Fraction, Fraction, Fraction]]:
    """Rows ``(h, x_h^(n), x^n / n!, |difference|)``, exact."""
    x = Fraction(x)
    limit = x ** n / math.factorial(n)
    rows = []
    for h in h_list:
        h = as_step(h)
        v = basis_poly_h(n, (x, 0), h).re
        rows.append((h, v, limit, abs(v - limit)))
    return rows


def convergence_csv(n: int, x, h_list, exact: bool = True) -> str:
    """CSV ``h,value,limit,abs_err`` for :func:`convergence_table`."""
    from .scalar import format_fraction

    fmt = format_fraction if exact else (lambda q: repr(float(q)))
    lines = ["h,value,limit,abs_err"]
    for row in convergence_table(n, x, h_list):
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"

"""Lattice geometry, window-supported lattice functions and difference calculus.

Functions live on finite rectangles ``[x0..x1] x [y0..y1]`` of the right
half-lattice ``Z_+ + iZ``. Difference operators shrink the window instead
of extrapolating, so every identity stays exactly checkable.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .linalg import max_abs, normalize
from .scalar import (
    GR,
    GaussianRational,
    ModeError,
    alpha_minus,
    alpha_plus,
    array_mode,
    as_scalar,
    default_mode,
    format_fraction,
    parse_scalar,
)

__all__ = [
    "LatticePoint",
    "Window",
    "LatticeFunction",
    "PathSpec",
    "WindowError",
    "PathError",
    "apply_difference",
    "is_discrete_analytic",
    "discrete_integral",
    "integral_from_origin",
    "staircase",
    "antiderivative_table",
]

DIFFERENCE_KINDS = ("dx", "dy", "dbar", "d", "derivative")


class WindowError(ValueError):
    """A point or stencil falls outside the window a function is known on."""


class PathError(ValueError):
    """A path has a non-unit step or leaves the host window."""


@dataclass(frozen=True, order=True)
class LatticePoint:
    """Gaussian integer ``x + iy``."""

    x: int
    y: int

    def __add__(self, other: "LatticePoint") -> "LatticePoint":
        return LatticePoint(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "LatticePoint") -> "LatticePoint":
        return LatticePoint(self.x - other.x, self.y - other.y)

    def conj(self) -> "LatticePoint":
        return LatticePoint(self.x, -self.y)

    @property
    def in_half_lattice(self) -> bool:
        return self.x >= 0

    def __complex__(self) -> complex:
        return complex(self.x, self.y)

    def scalar(self, exact: bool = True):
        return GR(self.x, self.y) if exact else complex(self.x, self.y)

    @classmethod
    def parse(cls, text: str) -> "LatticePoint":
        """Parse ``"2+3i"``, ``"-i"``, ``"4"`` or ``"2,3"``."""
        if "," in text:
            x, y = text.split(",")
            return cls(int(x), int(y))
        v = parse_scalar(text, exact=True)
        if v.re.denominator != 1 or v.im.denominator != 1:
            raise ValueError(f"{text!r} is not a lattice point")
        return cls(int(v.re), int(v.im))

    @classmethod
    def coerce(cls, z) -> "LatticePoint":
        if isinstance(z, LatticePoint):
            return z
        if isinstance(z, str):
            return cls.parse(z)
        if isinstance(z, tuple):
            return cls(int(z[0]), int(z[1]))
        if isinstance(z, GaussianRational):
            if z.re.denominator != 1 or z.im.denominator != 1:
                raise ValueError(f"{z} is not a lattice point")
            return cls(int(z.re), int(z.im))
        if isinstance(z, (int, np.integer)):
            return cls(int(z), 0)
        c = complex(z)
        if c.real != int(c.real) or c.imag != int(c.imag):
            raise ValueError(f"{z!r} is not a lattice point")
        return cls(int(c.real), int(c.imag))

    def __str__(self) -> str:
        if self.y == 0:
            return str(self.x)
        return f"{self.x}{'+' if self.y > 0 else '-'}{abs(self.y)}i"


ORIGIN = LatticePoint(0, 0)


@dataclass(frozen=True)
class Window:
    """Inclusive rectangle ``[x0..x1] x [y0..y1]``."""

    x0: int
    x1: int
    y0: int
    y1: int

    def __post_init__(self):
        if self.x1 < self.x0 or self.y1 < self.y0:
            raise WindowError(f"empty window {self}")

    @classmethod
    def covering(cls, *points: LatticePoint) -> "Window":
        pts = [LatticePoint.coerce(p) for p in points]
        return cls(min(p.x for p in pts), max(p.x for p in pts),
                   min(p.y for p in pts), max(p.y for p in pts))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.x1 - self.x0 + 1, self.y1 - self.y0 + 1)

    def contains(self, z: LatticePoint) -> bool:
        return self.x0 <= z.x <= self.x1 and self.y0 <= z.y <= self.y1

    def points(self) -> Iterator[LatticePoint]:
        for x in range(self.x0, self.x1 + 1):
            for y in range(self.y0, self.y1 + 1):
                yield LatticePoint(x, y)

    def index(self, z: LatticePoint) -> tuple[int, int]:
        if not self.contains(z):
            raise WindowError(f"{z} outside window {self}")
        return (z.x - self.x0, z.y - self.y0)

    def as_dict(self) -> dict:
        return {"x0": self.x0, "x1": self.x1, "y0": self.y0, "y1": self.y1}


class LatticeFunction:
    """Matrix-valued function sampled on a window of the right half-lattice.

    Parameters
    ----------
    window : Window
        Support rectangle; must satisfy ``x0 >= 0``.
    values : ndarray
        Shape ``(nx, ny, rows, cols)``; ``dtype=object`` holding
        :class:`GaussianRational` entries (exact mode) or ``complex128``.
    """

    __slots__ = ("window", "values", "exact")

    def __init__(self, window: Window, values: np.ndarray):
        if window.x0 < 0:
            raise WindowError("lattice functions live on the right half-lattice (x0 >= 0)")
        values = np.asarray(values)
        if values.ndim != 4 or values.shape[:2] != window.shape:
            raise ValueError(f"values of shape {values.shape} do not fit window {window}")
        exact = array_mode(values) == "exact"
        values = normalize(values, exact) if exact else values.astype(complex)
        values.flags.writeable = False
        self.window = window
        self.values = values
        self.exact = exact

    @classmethod
    def tabulate(cls, fn: Callable[[LatticePoint], object], window: Window,
                 exact: bool | None = None) -> "LatticeFunction":
        """Sample ``fn`` (scalar- or matrix-valued) at every window point."""
        if exact is None:
            exact = default_mode() == "exact"
        nx, ny = window.shape
        first = None
        data = {}
        for z in window.points():
            v = fn(z)
            arr = np.asarray(v, dtype=object if exact else complex)
            if arr.ndim == 0:
                arr = arr.reshape(1, 1)
            if first is None:
                first = arr.shape
            elif arr.shape != first:
                raise ValueError("fn returned values of different shapes")
            data[z] = arr
        values = np.empty((nx, ny) + first, dtype=object if exact else complex)
        for z, arr in data.items():
            i, j = window.index(z)
            values[i, j] = arr if exact else arr
        if exact:
            values = normalize(values, True)
        return cls(window, values)

    @classmethod
    def constant(cls, c, window: Window, exact: bool = True) -> "LatticeFunction":
        arr = np.asarray(c, dtype=object if exact else complex)
        if arr.ndim == 0:
            arr = arr.reshape(1, 1)
        if exact:
            arr = normalize(arr, True)
        nx, ny = window.shape
        values = np.empty((nx, ny) + arr.shape, dtype=arr.dtype)
        values[...] = arr
        return cls(window, values)

    @property
    def rows(self) -> int:
        return self.values.shape[2]

    @property
    def cols(self) -> int:
        return self.values.shape[3]

    @property
    def mode(self) -> str:
        return "exact" if self.exact else "float"

    def __call__(self, z) -> np.ndarray:
        z = LatticePoint.coerce(z)
        i, j = self.window.index(z)
        return self.values[i, j]

    def scalar_at(self, z):
        """Value at ``z`` for a 1x1 function."""
        return self(z)[0, 0]

    def restrict(self, window: Window) -> "LatticeFunction":
        w = self.window
        if not (w.contains(LatticePoint(window.x0, window.y0))
                and w.contains(LatticePoint(window.x1, window.y1))):
            raise WindowError(f"{window} not inside {w}")
        i0, j0 = window.x0 - w.x0, window.y0 - w.y0
        nx, ny = window.shape
        return LatticeFunction(window, self.values[i0:i0 + nx, j0:j0 + ny])

    def map_values(self, fn: Callable[[np.ndarray], np.ndarray]) -> "LatticeFunction":
        return LatticeFunction(self.window, fn(self.values))

    def __add__(self, other: "LatticeFunction") -> "LatticeFunction":
        w = _common_window(self, other)
        return LatticeFunction(w, self.restrict(w).values + other.restrict(w).values)

    def __sub__(self, other: "LatticeFunction") -> "LatticeFunction":
        w = _common_window(self, other)
        return LatticeFunction(w, self.restrict(w).values - other.restrict(w).values)

    def scale(self, c) -> "LatticeFunction":
        c = as_scalar(c, self.exact)
        return LatticeFunction(self.window, self.values * c)

    def left_multiply(self, m: np.ndarray) -> "LatticeFunction":
        """Pointwise ``M @ f(z)``."""
        m = np.asarray(m)
        return LatticeFunction(self.window, np.einsum("ij,xyjk->xyik", m, self.values)
                               if m.dtype != object else _obj_matmul(m, self.values, left=True))

    def right_multiply(self, m: np.ndarray) -> "LatticeFunction":
        """Pointwise ``f(z) @ M``."""
        m = np.asarray(m)
        return LatticeFunction(self.window, np.einsum("xyij,jk->xyik", self.values, m)
                               if m.dtype != object else _obj_matmul(m, self.values, left=False))

    def equals(self, other: "LatticeFunction") -> bool:
        """Exact equality of windows and all values."""
        return (self.window == other.window and self.values.shape == other.values.shape
                and all(a == b for a, b in zip(self.values.flat, other.values.flat)))

    def max_abs_diff(self, other: "LatticeFunction") -> float:
        w = _common_window(self, other)
        return max_abs(self.restrict(w).values - other.restrict(w).values)

    # serialization -------------------------------------------------------
    def to_json(self) -> dict:
        entries = []
        for z in self.window.points():
            v = self(z)
            if self.exact:
                re = [[format_fraction(e.re) for e in row] for row in v]
                im = [[format_fraction(e.im) for e in row] for row in v]
            else:
                re = [[float(e.real) for e in row] for row in v]
                im = [[float(e.imag) for e in row] for row in v]
            entries.append({"x": z.x, "y": z.y, "re": re, "im": im})
        return {"window": self.window.as_dict(), "rows": self.rows, "cols": self.cols,
                "mode": self.mode, "values": entries}

    @classmethod
    def from_json(cls, doc: dict) -> "LatticeFunction":
        w = Window(**{k: int(doc["window"][k]) for k in ("x0", "x1", "y0", "y1")})
        exact = doc.get("mode", "exact") == "exact"
        rows, cols = int(doc["rows"]), int(doc["cols"])
        nx, ny = w.shape
        values = np.empty((nx, ny, rows, cols), dtype=object if exact else complex)
        seen = set()
        for e in doc["values"]:
            z = LatticePoint(int(e["x"]), int(e["y"]))
            i, j = w.index(z)
            seen.add(z)
            for r in range(rows):
                for c in range(cols):
                    if exact:
                        values[i, j, r, c] = GR(Fraction(e["re"][r][c]), Fraction(e["im"][r][c]))
                    else:
                        values[i, j, r, c] = complex(e["re"][r][c], e["im"][r][c])
        if len(seen) != nx * ny:
            raise ValueError("JSON lattice function does not cover its window")
        return cls(w, values)

    def __repr__(self) -> str:
        return f"LatticeFunction(window={self.window}, shape={self.rows}x{self.cols}, mode={self.mode})"


def _obj_matmul(m: np.ndarray, values: np.ndarray, left: bool) -> np.ndarray:
    nx, ny = values.shape[:2]
    rows = m.shape[0] if left else values.shape[2]
    cols = values.shape[3] if left else m.shape[1]
    out = np.empty((nx, ny, rows, cols), dtype=object)
    for i in range(nx):
        for j in range(ny):
            out[i, j] = m @ values[i, j] if left else values[i, j] @ m
    return out


def _common_window(f: LatticeFunction, g: LatticeFunction) -> Window:
    if f.exact != g.exact:
        raise ModeError("mixed scalar modes: exact and float lattice functions")
    a, b = f.window, g.window
    return Window(max(a.x0, b.x0), min(a.x1, b.x1), max(a.y0, b.y0), min(a.y1, b.y1))


# difference operators --------------------------------------------------------

def _dx(v: np.ndarray) -> np.ndarray:
    return v[1:] - v[:-1]


def _dy(v: np.ndarray) -> np.ndarray:
    return v[:, 1:] - v[:, :-1]


def apply_difference(kind: str, f: LatticeFunction) -> LatticeFunction:
    """Apply a lattice difference operator.

    ``dx`` and ``dy`` are forward differences; ``dbar``/``d`` are the
    discrete Wirtinger operators
    ``a- dx + a+ dy + dx dy / 2`` and ``a+ dx + a- dy + dx dy / 2`` with
    ``a(+/-) = (1 +/- i)/2``; ``derivative`` is ``(dx - dy) / 2``.
    The output window loses one column (``dx``), one row (``dy``) or both.
    """
    if kind not in DIFFERENCE_KINDS:
        raise ValueError(f"unknown difference kind {kind!r}; expected one of {DIFFERENCE_KINDS}")
    w, v = f.window, f.values
    nx, ny = w.shape
    need_x = kind != "dy"
    need_y = kind != "dx"
    if (need_x and nx < 2) or (need_y and ny < 2):
        raise WindowError(f"window {w} too small for {kind}")
    exact = f.exact
    if kind == "dx":
        return LatticeFunction(Window(w.x0, w.x1 - 1, w.y0, w.y1), _dx(v))
    if kind == "dy":
        return LatticeFunction(Window(w.x0, w.x1, w.y0, w.y1 - 1), _dy(v))
    dx = _dx(v)[:, :-1]
    dy = _dy(v)[:-1, :]
    out_w = Window(w.x0, w.x1 - 1, w.y0, w.y1 - 1)
    half = GR(Fraction(1, 2)) if exact else 0.5
    if kind == "derivative":
        return LatticeFunction(out_w, (dx - dy) * half)
    dxdy = _dy(_dx(v))
    ap, am = alpha_plus(exact), alpha_minus(exact)
    if kind == "dbar":
        out = dx * am + dy * ap + dxdy * half
    else:
        out = dx * ap + dy * am + dxdy * half
    return LatticeFunction(out_w, out)


def ferrand_residuals(f: LatticeFunction) -> np.ndarray:
    """Cellwise ``(f(z+1+i)-f(z))/(1+i) - (f(z+1)-f(z+i))/(1-i)``."""
    v = f.values
    if f.exact:
        inv_p = GR(1, 1).inverse()
        inv_m = GR(1, -1).inverse()
    else:
        inv_p, inv_m = 1 / (1 + 1j), 1 / (1 - 1j)
    return (v[1:, 1:] - v[:-1, :-1]) * inv_p - (v[1:, :-1] - v[:-1, 1:]) * inv_m


def is_discrete_analytic(f: LatticeFunction, tol: float = 0.0) -> tuple[bool, float]:
    """Check the lattice Cauchy-Riemann equation on every cell of the window.

    Returns ``(flag, max_residual)`` with the entrywise max modulus of the
    residual. In exact mode ``tol=0`` demands exact vanishing.
    """
    nx, ny = f.window.shape
    if nx < 2 or ny < 2:
        raise WindowError(f"window {f.window} too small; need at least 2x2")
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    if f.exact:
        res = ferrand_residuals(f)
        if tol == 0:
            ok = not any(res.flat)
            return ok, max_abs(res)
        m = max_abs(res)
        return m <= tol, m
    v = f.values.reshape(nx, ny, -1)
    m = kernels.ferrand_residual(v)
    return m <= tol, m


# discrete integration ------------------------------------------------------

_STEPS = {(1, 0), (-1, 0), (0, 1), (0, -1)}


@dataclass(frozen=True)
class PathSpec:
    """Lattice path with unit horizontal/vertical steps."""

    vertices: tuple[LatticePoint, ...]

    def __init__(self, vertices: Iterable):
        pts = tuple(LatticePoint.coerce(v) for v in vertices)
        if not pts:
            raise PathError("empty path")
        for a, b in zip(pts, pts[1:]):
            if (b.x - a.x, b.y - a.y) not in _STEPS:
                raise PathError(f"non-unit step {a} -> {b}")
        object.__setattr__(self, "vertices", pts)

    @property
    def closed(self) -> bool:
        return self.vertices[0] == self.vertices[-1]

    @classmethod
    def parse(cls, text: str) -> "PathSpec":
        """``"0;1;1+i;i;0"`` (semicolon or whitespace separated)."""
        parts = [p for p in text.replace(";", " ").split() if p]
        return cls(LatticePoint.parse(p) for p in parts)


def staircase(z, order: str = "xy", start: LatticePoint = ORIGIN) -> PathSpec:
    """Path from ``start`` to ``z``: horizontal then vertical (``"xy"``) or the reverse."""
    z = LatticePoint.coerce(z)
    pts = [start]
    cur = start

    def walk(dx, dy, count):
        nonlocal cur
        for _ in range(count):
            cur = LatticePoint(cur.x + dx, cur.y + dy)
            pts.append(cur)

    sx = 1 if z.x >= start.x else -1
    sy = 1 if z.y >= start.y else -1
    if order == "xy":
        walk(sx, 0, abs(z.x - start.x))
        walk(0, sy, abs(z.y - start.y))
    elif order == "yx":
        walk(0, sy, abs(z.y - start.y))
        walk(sx, 0, abs(z.x - start.x))
    else:
        raise ValueError("order must be 'xy' or 'yx'")
    return PathSpec(pts)


def discrete_integral(f: LatticeFunction, path: PathSpec) -> np.ndarray:
    """Trapezoidal lattice integral ``sum (f(z_{k-1}) + f(z_k))/2 * (z_k - z_{k-1})``."""
    for z in path.vertices:
        if not f.window.contains(z):
            raise PathError(f"path vertex {z} outside window {f.window}")
    exact = f.exact
    total = np.zeros((f.rows, f.cols), dtype=object if exact else complex)
    if exact:
        total[...] = GR(0)
    half = GR(Fraction(1, 2)) if exact else 0.5
    for a, b in zip(path.vertices, path.vertices[1:]):
        step = GR(b.x - a.x, b.y - a.y) if exact else complex(b.x - a.x, b.y - a.y)
        total = total + (f(a) + f(b)) * (half * step)
    return total


def integral_from_origin(f: LatticeFunction, z, order: str = "xy") -> np.ndarray:
    """``int_0^z f dz`` along the canonical staircase (horizontal steps first)."""
    z = LatticePoint.coerce(z)
    if not f.window.contains(z):
        raise WindowError(f"{z} outside window {f.window}")
    if not f.window.contains(ORIGIN):
        raise WindowError(f"origin outside window {f.window}")
    return discrete_integral(f, staircase(z, order))


def antiderivative_table(f: LatticeFunction) -> LatticeFunction:
    """``int_0^z f dz`` for every ``z`` of the window, along staircases.

    Uses running trapezoid sums: first along the real axis, then up/down
    each vertical line. Requires ``x0 = 0`` and ``y0 <= 0 <= y1``.
    """
    w = f.window
    if w.x0 != 0 or not (w.y0 <= 0 <= w.y1):
        raise WindowError(f"origin must be the lower-left real corner of {w}")
    v = f.values
    exact = f.exact
    half = GR(Fraction(1, 2)) if exact else 0.5
    iu = GR(0, 1) if exact else 1j
    out = np.empty_like(v)
    j0 = -w.y0
    nx, ny = w.shape
    acc = v[0, j0] * (GR(0) if exact else 0)
    out[0, j0] = acc
    for i in range(1, nx):
        acc = acc + (v[i - 1, j0] + v[i, j0]) * half
        out[i, j0] = acc
    for i in range(nx):
        acc = out[i, j0]
        for j in range(j0 + 1, ny):
            acc = acc + (v[i, j - 1] + v[i, j]) * (half * iu)
            out[i, j] = acc
        acc = out[i, j0]
        for j in range(j0 - 1, -1, -1):
            acc = acc - (v[i, j + 1] + v[i, j]) * (half * iu)
            out[i, j] = acc
    return LatticeFunction(w, out)


def lattice_points(spec: str | Sequence) -> list[LatticePoint]:
    if isinstance(spec, str):
        return [LatticePoint.parse(p) for p in spec.replace(";", " ").split()]
    return [LatticePoint.coerce(p) for p in spec]

"""Exact Gaussian-rational scalars and scalar-mode bookkeeping.

Every computation in the package runs in one of two modes:

``exact``
    Entries are :class:`GaussianRational` (or plain ``int``/``Fraction``),
    matrices are numpy arrays of ``dtype=object``.
``float``
    Entries are Python/numpy complex doubles, matrices are ``complex128``.

Mixing the two inside one operation raises :class:`ModeError`.
"""
from __future__ import annotations

import math
import numbers
import os
import re
from fractions import Fraction

import numpy as np

__all__ = [
    "GaussianRational",
    "GR",
    "ModeError",
    "ALPHA_PLUS",
    "ALPHA_MINUS",
    "I_UNIT",
    "alpha_plus",
    "alpha_minus",
    "default_mode",
    "as_scalar",
    "parse_scalar",
    "format_scalar",
    "scalar_mode",
    "array_mode",
    "as_matrix",
    "to_complex_array",
]


class ModeError(TypeError):
    """Raised when exact and floating point values meet in one computation."""


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, np.integer)):
        return Fraction(int(v))
    if isinstance(v, str):
        return Fraction(v)
    raise ModeError(f"cannot use {type(v).__name__} value {v!r} in exact mode")


class GaussianRational:
    """Complex number with rational real and imaginary parts.

    Instances are immutable and hashable. Arithmetic with ``int`` and
    ``Fraction`` promotes to :class:`GaussianRational`; arithmetic with
    ``float``/``complex`` raises :class:`ModeError`.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> "GaussianRational":
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    @classmethod
    def coerce(cls, v) -> "GaussianRational":
        if isinstance(v, GaussianRational):
            return v
        if isinstance(v, (int, np.integer, Fraction)):
            return cls._raw(_frac(v), Fraction(0))
        raise ModeError(f"cannot use {type(v).__name__} value {v!r} in exact mode")

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational._raw(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Fraction)):
            return GaussianRational._raw(self.re + other, self.im)
        if isinstance(other, np.integer):
            return self + int(other)
        if isinstance(other, (float, complex, np.inexact)):
            raise ModeError("mixed scalar modes: exact + float")
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational._raw(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, Fraction)):
            return GaussianRational._raw(self.re - other, self.im)
        if isinstance(other, np.integer):
            return self - int(other)
        if isinstance(other, (float, complex, np.inexact)):
            raise ModeError("mixed scalar modes: exact - float")
        return NotImplemented

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            a, b, c, d = self.re, self.im, other.re, other.im
            return GaussianRational._raw(a * c - b * d, a * d + b * c)
        if isinstance(other, (int, Fraction)):
            return GaussianRational._raw(self.re * other, self.im * other)
        if isinstance(other, np.integer):
            return self * int(other)
        if isinstance(other, (float, complex, np.inexact)):
            raise ModeError("mixed scalar modes: exact * float")
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        return GaussianRational._raw(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if isinstance(other, GaussianRational):
            return self * other.inverse()
        if isinstance(other, np.integer):
            other = int(other)
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("GaussianRational division by zero")
            return GaussianRational._raw(self.re / other, self.im / other)
        if isinstance(other, (float, complex, np.inexact)):
            raise ModeError("mixed scalar modes: exact / float")
        return NotImplemented

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, (int, np.integer)):
            return NotImplemented
        k = int(k)
        base = self if k >= 0 else self.inverse()
        result = GaussianRational._raw(Fraction(1), Fraction(0))
        k = abs(k)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self.re, -self.im)

    def abs2(self) -> Fraction:
        """Squared modulus, exact."""
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> float:
        return math.hypot(self.re, self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction, np.integer)):
            return self.im == 0 and self.re == other
        if isinstance(other, numbers.Complex):
            return complex(self) == complex(other)
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GR({format_fraction(self.re)!r}, {format_fraction(self.im)!r})"

    def __str__(self):
        return format_scalar(self)


GR = GaussianRational

ALPHA_PLUS = GR(Fraction(1, 2), Fraction(1, 2))
ALPHA_MINUS = GR(Fraction(1, 2), Fraction(-1, 2))
I_UNIT = GR(0, 1)


def alpha_plus(exact: bool = True):
    return ALPHA_PLUS if exact else 0.5 + 0.5j


def alpha_minus(exact: bool = True):
    return ALPHA_MINUS if exact else 0.5 - 0.5j


def default_mode() -> str:
    """Mode used when the caller does not choose one (``DALAT_MODE`` overrides)."""
    mode = os.environ.get("DALAT_MODE", "exact").strip().lower()
    if mode not in ("exact", "float"):
        raise ValueError(f"DALAT_MODE must be 'exact' or 'float', got {mode!r}")
    return mode


def scalar_mode(v) -> str:
    if isinstance(v, (GaussianRational, Fraction, int, np.integer)):
        return "exact"
    if isinstance(v, (float, complex, np.inexact)):
        return "float"
    raise TypeError(f"not a scalar: {v!r}")


def array_mode(a: np.ndarray) -> str:
    """Mode of a matrix; raises :class:`ModeError` for mixed object arrays."""
    if a.dtype != object:
        if np.issubdtype(a.dtype, np.integer):
            return "exact"
        return "float"
    modes = {scalar_mode(v) for v in a.flat}
    if len(modes) > 1:
        raise ModeError("mixed scalar modes inside one array")
    return modes.pop() if modes else "exact"


def as_scalar(v, exact: bool = True):
    """Convert ``v`` to a scalar of the requested mode."""
    if exact:
        if isinstance(v, str):
            return parse_scalar(v, exact=True)
        return GaussianRational.coerce(v)
    if isinstance(v, str):
        return parse_scalar(v, exact=False)
    return complex(v)


def as_matrix(a, exact: bool = True) -> np.ndarray:
    """2-D array in the requested mode (object array of GR, or complex128)."""
    arr = np.array(a, dtype=object if exact else complex)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if exact:
        out = np.empty(arr.shape, dtype=object)
        for idx, v in np.ndenumerate(arr):
            out[idx] = as_scalar(v, exact=True)
        return out
    return arr.astype(complex)


def to_complex_array(a: np.ndarray) -> np.ndarray:
    if a.dtype == object:
        return np.array([complex(v) for v in a.flat], dtype=complex).reshape(a.shape)
    return np.asarray(a, dtype=complex)


# parsing / formatting ----------------------------------------------------

def format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(v) -> str:
    """Human-readable scalar: ``3``, ``-1/2+1/2i``, ``0.5-0.25i``."""
    if isinstance(v, (int, np.integer, Fraction)):
        v = GaussianRational.coerce(v)
    if isinstance(v, GaussianRational):
        re_s, im = format_fraction(v.re), v.im
        if im == 0:
            return re_s
        sign = "-" if im < 0 else "+"
        mag = format_fraction(abs(im))
        mag = "" if mag == "1" else mag
        if v.re == 0:
            return f"{'-' if im < 0 else ''}{mag}i"
        return f"{re_s}{sign}{mag}i"
    c = complex(v)
    if c.imag == 0:
        return repr(c.real)
    if c.real == 0:
        return f"{c.imag!r}i"
    return f"{c.real!r}{'+' if c.imag >= 0 else '-'}{abs(c.imag)!r}i"


_NUM = r"[0-9]+(?:/[0-9]+)?(?:\.[0-9]*)?(?:[eE][+-]?[0-9]+)?"
_SCALAR_RE = re.compile(
    rf"^\s*(?P<re>[+-]?{_NUM})?\s*(?:(?P<isign>[+-])?\s*(?P<im>{_NUM})?\s*[ij])?\s*$"
)


def parse_scalar(text: str, exact: bool = True):
    """Parse ``"2+3i"``, ``"-1/2i"``, ``"i"``, ``"0.9"`` into a scalar.

    In exact mode decimal literals are converted exactly
    (``"0.9" -> 9/10``).
    """
    s = text.strip().replace(" ", "")
    m = _SCALAR_RE.match(s)
    if not s or m is None:
        raise ValueError(f"cannot parse scalar {text!r}")
    re_part, isign, im_part = m.group("re"), m.group("isign"), m.group("im")
    has_imag = s[-1] in "ij"
    if has_imag and isign is None and re_part is not None and im_part is None:
        # "3i" / "-1/2i": the regex put the coefficient into the real group
        re_part, im_part = None, re_part
    if has_imag and im_part is None:
        im_part = "1"
    if has_imag and isign == "-":
        im_part = "-" + im_part
    conv = Fraction if exact else (lambda t: float(Fraction(t)))
    re_v = conv(re_part) if re_part else conv(0)
    im_v = conv(im_part) if has_imag else conv(0)
    if exact:
        return GaussianRational(re_v, im_v)
    return complex(re_v, im_v)

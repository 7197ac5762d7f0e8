from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dalat.scalar import (ALPHA_MINUS, ALPHA_PLUS, GR, ModeError, as_matrix, format_scalar,
                          parse_scalar)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
gaussian = st.builds(GR, fractions, fractions)


def test_alpha_constants_are_exact():
    assert ALPHA_PLUS == GR(Fraction(1, 2), Fraction(1, 2))
    assert ALPHA_PLUS * ALPHA_MINUS == GR(Fraction(1, 2))
    assert ALPHA_PLUS + ALPHA_MINUS == GR(1)


def test_division_and_powers():
    z = GR(3, 1) / GR(3, -1)
    assert z == GR(Fraction(4, 5), Fraction(3, 5))
    assert GR(0, 1) ** 4 == GR(1)
    assert GR(1, 1) ** -2 == GR(0, Fraction(-1, 2))
    with pytest.raises(ZeroDivisionError):
        GR(1) / GR(0)


def test_mode_mixing_is_rejected():
    with pytest.raises(ModeError):
        GR(1) + 0.5
    with pytest.raises(ModeError):
        GR(1) * 1j


def test_numpy_integers_are_exact():
    assert GR(1, 2) * np.int64(3) == GR(3, 6)


@pytest.mark.parametrize("text, value", [
    ("2+3i", GR(2, 3)),
    ("-1/2i", GR(0, Fraction(-1, 2))),
    ("i", GR(0, 1)),
    ("-i", GR(0, -1)),
    ("0.9", GR(Fraction(9, 10))),
    ("1/2-1/3i", GR(Fraction(1, 2), Fraction(-1, 3))),
])
def test_parse_scalar(text, value):
    assert parse_scalar(text) == value


def test_parse_float_mode():
    assert parse_scalar("1/2+i", exact=False) == 0.5 + 1j


@pytest.mark.parametrize("value, text", [
    (GR(3), "3"), (GR(Fraction(-1, 2), Fraction(1, 2)), "-1/2+1/2i"), (GR(0, -1), "-i"),
])
def test_format_scalar(value, text):
    assert format_scalar(value) == text


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_scalar("2+3k")


def test_as_matrix_shapes():
    assert as_matrix(5).shape == (1, 1)
    assert as_matrix([1, 2]).shape == (2, 1)


@given(gaussian)
def test_format_parse_roundtrip(z):
    assert parse_scalar(format_scalar(z)) == z


@given(gaussian, gaussian, gaussian)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    if b != 0:
        assert (a / b) * b == a


@given(gaussian)
def test_abs2_matches_complex(z):
    assert float(z.abs2()) == pytest.approx(abs(complex(z)) ** 2)

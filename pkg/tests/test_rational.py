from fractions import Fraction

import pytest

from bonuslab import UnparsableNumber, as_rational, format_rational
from bonuslab.rational import approx_decimal, rationals


def test_parses_integers_and_fractions():
    assert as_rational(3) == Fraction(3)
    assert as_rational("3/5") == Fraction(3, 5)
    assert as_rational("-7/4") == Fraction(-7, 4)
    assert as_rational(Fraction(1, 3)) == Fraction(1, 3)


def test_decimal_strings_are_exact():
    # "1.051" must become 1051/1000, not the nearest binary float.
    assert as_rational("1.051") == Fraction(1051, 1000)
    assert as_rational("1e-6") == Fraction(1, 10**6)
    assert as_rational("-0.25") == Fraction(-1, 4)


def test_rejects_floats():
    with pytest.raises(TypeError):
        as_rational(0.1)
    with pytest.raises(TypeError):
        as_rational(True)


def test_rejects_garbage_strings():
    for bad in ("", "one", "1/0", "2:3", "1.2.3"):
        with pytest.raises(UnparsableNumber):
            as_rational(bad)


def test_format_round_trips():
    for text in ("0", "7", "-3", "3/5", "-1051/1000"):
        assert format_rational(as_rational(text)) == text


def test_approx_decimal():
    assert approx_decimal(Fraction(1, 3)) == "0.333333"
    assert approx_decimal(Fraction(-1, 3)) == "-0.333333"
    assert approx_decimal(Fraction(1, 2), places=0) == "1"
    assert approx_decimal(Fraction(21, 20)) == "1.050000"
    # huge values must not lose digits to float formatting
    assert approx_decimal(Fraction(10**30) + Fraction(1, 2)) == f"{10**30}.500000"


def test_rationals_coerces_sequences():
    assert rationals(["1/2", 1, Fraction(3)]) == (
        Fraction(1, 2),
        Fraction(1),
        Fraction(3),
    )

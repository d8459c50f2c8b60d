"""
testing/test_surds.py
---------------------
Unit tests for the exact number helpers (surds.py).
"""
from __future__ import annotations

from fractions import Fraction

import pytest
import sympy

from surds import ceil, decimal, floor, is_rational, normal, parse_rational, render, sign, sqrt


class TestNormalForm:

    def test_square_factors_are_pulled_out(self):
        assert sqrt(48) == 4 * sympy.sqrt(3)

    def test_rational_radicand(self):
        # √(1/2) = √2/2
        assert sqrt(Fraction(1, 2)) == sympy.sqrt(2) / 2

    def test_perfect_square_comes_back_as_fraction(self):
        x = sqrt(Fraction(9, 4))
        assert isinstance(x, Fraction)
        assert x == Fraction(3, 2)
        assert is_rational(x)

    def test_negative_radicand_raises(self):
        with pytest.raises(ValueError, match="negative"):
            sqrt(-1)

    def test_float_is_rejected(self):
        with pytest.raises(TypeError):
            normal(0.5)
        with pytest.raises(TypeError):
            sqrt(0.5)

    def test_rational_expressions_collapse(self):
        x = normal((1 + sympy.sqrt(2)) * (sympy.sqrt(2) - 1))
        assert x == 1
        assert isinstance(x, Fraction)


class TestArithmetic:

    def test_product_of_roots(self):
        assert normal(sqrt(6) * sqrt(10)) == 2 * sympy.sqrt(15)

    def test_inverse_rationalises(self):
        assert normal(1 / (1 + sqrt(2))) == sympy.sqrt(2) - 1

    def test_inverse_with_two_primes(self):
        assert normal(1 / (sqrt(2) + sqrt(3))) == sympy.sqrt(3) - sympy.sqrt(2)

    def test_fraction_and_surd_mix(self):
        x = normal(Fraction(1, 2) + sqrt(2) * Fraction(3, 4))
        assert render(x) == "1/2 + sqrt(18)/4"

    def test_division_by_zero_raises(self):
        with pytest.raises(ZeroDivisionError):
            normal(sqrt(2) / sympy.Integer(0))


class TestComparison:

    def test_sqrt48_below_seven(self):
        assert sqrt(48) < 7
        assert sqrt(49) == 7

    def test_close_values_are_ordered_exactly(self):
        # √2 + √3 = 3.1462643...
        x = sqrt(2) + sqrt(3)
        assert x > Fraction(3146264, 1000000)
        assert x < Fraction(3146265, 1000000)

    def test_sign_of_mixed_expression(self):
        # 3√5 − 5√2 − 1 ≈ −1.363
        assert sign(3 * sqrt(5) - 5 * sqrt(2) - 1) == -1
        # √5 − 2 − √(1/20) = √5·(9/10) − 2 ≈ 0.0125
        assert sign(sqrt(5) - 2 - sqrt(Fraction(1, 20))) == 1

    def test_sign_of_zero(self):
        assert sign(sqrt(8) - 2 * sqrt(2)) == 0
        assert sign(Fraction(0)) == 0

    def test_floor_and_ceil(self):
        assert floor(sqrt(48)) == 6
        assert ceil(sqrt(48)) == 7
        assert floor(Fraction(-3)) == -3
        assert ceil(-sqrt(2)) == -1


class TestDisplay:

    def test_render(self):
        assert render(sqrt(48)) == "sqrt(48)"
        assert render(1 - sqrt(2)) == "1 - sqrt(2)"
        assert render(sqrt(3) / 2) == "sqrt(3)/2"
        assert render(Fraction(6, 3)) == "2"
        assert render(Fraction(-7, 221)) == "-7/221"

    def test_decimal_has_twelve_digits(self):
        assert decimal(sqrt(48)) == "6.928203230276"
        assert decimal(Fraction(7)) == "7.000000000000"
        assert decimal(Fraction(-1, 3), 4) == "-0.3333"


class TestParseRational:

    @pytest.mark.parametrize("text, expected", [
        ("3/7", Fraction(3, 7)),
        ("-2", Fraction(-2)),
        ("0.25", Fraction(1, 4)),
        (" 5 ", Fraction(5)),
    ])
    def test_accepted_forms(self, text, expected):
        assert parse_rational(text) == expected

    @pytest.mark.parametrize("text", ["", "abc", "1/0", "1//2"])
    def test_rejected_forms(self, text):
        with pytest.raises(ValueError, match="Not an exact rational"):
            parse_rational(text)

"""
surds.py
--------
Exact real numbers for the tilt-plane and Brill–Noether code.

Rationals are plain `fractions.Fraction`. Anything involving a square root
is a sympy expression kept in expanded form, a sum of rational multiples of
square roots of squarefree integers. Those are linearly independent over ℚ,
so equality is structural and sympy's relationals decide order exactly.

`normal` is the only way values come back from sympy: rational results are
turned back into Fractions so the two number types never mix.

Usage
-----
    from surds import sqrt, sign, render, decimal

    x = sqrt(48)                   # 4*sqrt(3)
    x < 7                          # True, exactly
    render(x)                      # 'sqrt(48)'
    decimal(x)                     # '6.928203230276'
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Union

import sympy

from config import DISPLAY_DIGITS

Exact = Union[Fraction, sympy.Expr]


def _to_sympy(value) -> sympy.Expr:
    if isinstance(value, sympy.Expr):
        return value
    if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
        raise TypeError(f"Expected an exact number, got {type(value).__name__}")
    value = Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


def normal(value) -> Exact:
    """Expanded normal form with rationalised denominators; rationals as Fraction."""
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return Fraction(value)
    expr = _to_sympy(value)
    if expr.has(sympy.zoo, sympy.nan):
        raise ZeroDivisionError(f"Division by zero in {expr}")
    expr = sympy.expand(sympy.radsimp(sympy.expand(expr)))
    if expr.is_Rational:
        return Fraction(int(expr.p), int(expr.q))
    if not expr.is_number or expr.is_extended_real is False:
        raise ValueError(f"{expr} is not a real number")
    return expr


@lru_cache(maxsize=8192)
def _sqrt(q: Fraction) -> Exact:
    return normal(sympy.sqrt(_to_sympy(q)))


def sqrt(value) -> Exact:
    """√value; squares are pulled out, so √(1/2) = √2/2 and √(9/4) = 3/2."""
    if isinstance(value, sympy.Expr):
        value = normal(value)
    if not isinstance(value, (int, Fraction)) or isinstance(value, bool):
        raise TypeError(f"Square roots are taken of rationals, got {value}")
    q = Fraction(value)
    if q < 0:
        raise ValueError(f"Square root of negative rational {q}")
    return _sqrt(q)


def is_rational(value) -> bool:
    return isinstance(normal(value), Fraction)


def sign(value) -> int:
    x = normal(value)
    if isinstance(x, Fraction):
        return (x > 0) - (x < 0)
    if x.is_positive:
        return 1
    if x.is_negative:
        return -1
    raise ValueError(f"Cannot decide the sign of {x}")


def floor(value) -> int:
    x = normal(value)
    if isinstance(x, Fraction):
        return math.floor(x)
    return int(sympy.floor(x))


def ceil(value) -> int:
    x = normal(value)
    if isinstance(x, Fraction):
        return math.ceil(x)
    return int(sympy.ceiling(x))


# ---------------------------------------------------------------------------
# Display
# ---------------------------------------------------------------------------

def _fraction_text(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _radicand(term: sympy.Expr) -> int:
    if term == 1:
        return 1
    if term.is_Pow and term.exp == sympy.Rational(1, 2) and term.base.is_Integer:
        return int(term.base)
    raise ValueError(f"{term} is not a square root of an integer")


def render(value) -> str:
    """Canonical text: rational part first, then each c·√k written as sqrt(c²k)."""
    x = normal(value)
    if isinstance(x, Fraction):
        return _fraction_text(x)
    terms = sorted(
        (_radicand(term), Fraction(int(c.p), int(c.q)))
        for term, c in x.as_coefficients_dict().items()
    )
    parts: list[str] = []
    for k, c in terms:
        if k == 1:
            text = _fraction_text(abs(c))
        else:
            num, den = abs(c).numerator, abs(c).denominator
            text = f"sqrt({num * num * k})"
            if den != 1:
                text = f"{text}/{den}"
        if not parts:
            parts.append(f"-{text}" if c < 0 else text)
        else:
            parts.append(f"{'-' if c < 0 else '+'} {text}")
    return " ".join(parts)


def decimal(value, digits: int = DISPLAY_DIGITS) -> str:
    """Fixed-point text with `digits` places, rounded half to even."""
    x = _to_sympy(normal(value))
    return format(sympy.Float(sympy.N(x, digits + 30), digits + 30), f".{digits}f")


def parse_rational(text: str) -> Fraction:
    """Parse '3/7', '-2', '0.25' into an exact Fraction."""
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"Not an exact rational: {text!r}") from None

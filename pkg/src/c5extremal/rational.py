"""Exact rational helpers: printed decimals, p/q strings and enclosures."""

from __future__ import annotations

from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from math import isqrt


def dec(text: str) -> Fraction:
    """Exact value of a printed decimal, e.g. ``dec("0.0065") == 65/10**4``."""
    return Fraction(Decimal(text))


def pq(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_pq(text: str) -> Fraction:
    return Fraction(text)


def decimal_str(x: Fraction | int, digits: int = 12) -> str:
    """Round-half-even decimal rendering with ``digits`` significant digits."""
    x = Fraction(x)
    if x == 0:
        return "0"
    with localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = ROUND_HALF_EVEN
        d = Decimal(x.numerator) / Decimal(x.denominator)
    return format(d, "f") if abs(d) >= Decimal("1e-6") else format(d, "e")


def rational_json(x: Fraction | int) -> dict:
    return {"exact": pq(x), "decimal": decimal_str(x)}


def sqrt_enclosure(q: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    """Rationals lo <= sqrt(q) <= hi with hi - lo <= width.

    Bisection on the square: the bracket [lo, hi] keeps lo^2 <= q <= hi^2.
    The starting bracket comes from an integer square root at a scale
    fine enough that few halvings remain.
    """
    if q < 0:
        raise ValueError("square root of a negative number")
    if q == 0:
        return Fraction(0), Fraction(0)
    scale = 1
    while Fraction(1, scale) > width:
        scale *= 2
    m = isqrt(q.numerator * scale * scale // q.denominator)
    lo, hi = Fraction(m, scale), Fraction(m + 1, scale)
    assert lo * lo <= q <= hi * hi
    while hi - lo > width:
        mid = (lo + hi) / 2
        if mid * mid <= q:
            lo = mid
        else:
            hi = mid
    return lo, hi

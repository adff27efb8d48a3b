"""Closed-form inequality steps of the stability argument.

Each function evaluates one printed expression exactly.  Inputs are the
bounds already established upstream: class sizes x_min <= x_i <= x_max for
the five pentagon classes, the leftover mass x0, the funky-pair mass f and
the cap d_f on the funky degree of a classified vertex.  All values are
normalised by the appropriate power of n.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial


def _q(*xs):
    return [Fraction(x) for x in xs]


def pair_pentagons_upper(x0, f, df, xmax) -> Fraction:
    """Pentagons through a funky pair uv, over n^3, before the flip.

    x0/2 with a third vertex outside the classes, f with another funky pair,
    2 d_f^2 with two funky partners and 9 d_f x_max^2 with exactly one.
    """
    x0, f, df, xmax = _q(x0, f, df, xmax)
    return x0 / 2 + f + 2 * df * df + 9 * df * xmax * xmax


def pair_pentagons_lower(xmin, f, df, xmax) -> Fraction:
    """Pentagons through uv, over n^3, after flipping the pair to match the pattern."""
    xmin, f, df, xmax = _q(xmin, f, df, xmax)
    return (xmin - 2 * df) * xmin * xmin - f * xmax


def outside_vertex_funky_floor(x0, xmin, xmax) -> Fraction:
    """Smallest d_f(x) compatible with (x_min - d) x_min^2 <= d x_max^2 + x0/2."""
    x0, xmin, xmax = _q(x0, xmin, xmax)
    return (xmin ** 3 - x0 / 2) / (xmax * xmax + xmin * xmin)


def vertex_share(ell, k: int = 5) -> Fraction:
    """Copies through one vertex, over n^(k-1), in a vertex-transitive limit of density ell."""
    return Fraction(ell) / factorial(k - 1)


def balance_leading(ell, k: int = 5) -> Fraction:
    """Leading coefficient of the gain from moving a vertex between unbalanced classes.

    A negative value means an imbalance of two or more strictly loses
    pentagons for large n.
    """
    ell = Fraction(ell)
    return 2 * ell / factorial(k) * Fraction(4, 125) - Fraction(1, 125)

"""Exact bounds from the reduced class-size quadratic programs.

All four programs live on the triangle x0 + x1 + 4y = 1 (x2..x5 equalised
to y, the remaining class x0 free) with the pentagon-profile constraint

    Q(x1, y) = 2*sum_{i<j} x_i x_j - a*sum x_i^2 = 8 x1 y + (12 - 4a) y^2 - a x1^2 >= rhs

(after setting the funky mass f to zero; for the f objective, f <= (Q - rhs)/2).
The feasible set is two-dimensional, so the optimum is found by listing
the KKT candidates for every active set of at most two constraints.  Each
candidate comes from a univariate quadratic whose roots are enclosed
rationally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .rational import dec, sqrt_enclosure

ENCLOSURE_WIDTH = Fraction(1, 10 ** 12)
PRINTED_RHS = dec("0.003979")


class InfeasibleProgram(ValueError):
    pass


@dataclass(frozen=True)
class FlagConstants:
    """Inputs produced by the flag-algebra computation (taken as given)."""

    c5_upper: Fraction = dec("0.03846157")
    diff_lower: Fraction = Fraction(
        1349894760355389179787709186391, 420000000000000000000000000000000
    )
    a: Fraction = dec("3.98")

    def __post_init__(self):
        for name in ("c5_upper", "diff_lower", "a"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))


def derive_main_threshold(fc: FlagConstants) -> Fraction:
    """Lower bound on C22111(Z) - a*C31111(Z) for the best pentagon Z.

    Averaging over all pentagons gives (4/21*C22111 - a/7*C31111)/C5, which
    is (4*C22111 - 3a*C31111)/(21*C5); with a = 3.98 the numerator is the
    flag-algebra difference bound.
    """
    return fc.diff_lower / 21 / fc.c5_upper


def rhs_value(fc: FlagConstants, mode: str) -> Fraction:
    if mode == "printed":
        return PRINTED_RHS
    if mode == "derived":
        return derive_main_threshold(fc)
    raise ValueError(f"unknown rhs mode {mode!r} (printed or derived)")


def main3_lhs(x: tuple, f: Fraction, a: Fraction) -> Fraction:
    """2*sum_{1<=i<j<=5} x_i x_j - 2f - a*sum_{i=1..5} x_i^2 for x = (x0, ..., x5)."""
    xs = [Fraction(v) for v in x[1:6]]
    s = sum(xs)
    sq = sum(v * v for v in xs)
    return (s * s - sq) - 2 * Fraction(f) - Fraction(a) * sq


def max_funky_degree_bound(fc: FlagConstants, x1min: Fraction) -> Fraction:
    """1 - (1 + a)*x1min, the cap on a classified vertex's funky degree."""
    return 1 - (1 + fc.a) * Fraction(x1min)


# ---------------------------------------------------------------- reduced programs

OBJECTIVES = ("min_x1", "max_x1", "max_x0", "max_f")


@dataclass(frozen=True)
class ReducedProgram:
    objective: str
    rhs: Fraction
    a: Fraction = dec("3.98")

    def __post_init__(self):
        if self.objective not in OBJECTIVES:
            raise ValueError(f"objective must be one of {OBJECTIVES}")
        if Fraction(self.rhs) <= 0:
            raise ValueError("rhs must be positive")

    def q(self, x1: Fraction, y: Fraction) -> Fraction:
        return 8 * x1 * y + (12 - 4 * self.a) * y * y - self.a * x1 * x1

    def feasible(self, x1: Fraction, y: Fraction) -> bool:
        return x1 >= 0 and y >= 0 and x1 + 4 * y <= 1 and self.q(x1, y) >= self.rhs

    def value(self, x1: Fraction, y: Fraction) -> Fraction:
        if self.objective in ("min_x1", "max_x1"):
            return x1
        if self.objective == "max_x0":
            return 1 - x1 - 4 * y
        return (self.q(x1, y) - self.rhs) / 2


@dataclass(frozen=True)
class CertifiedInterval:
    """The optimum lies in [lo, hi]; ``witness`` = (x0, x1, y, f) is an exactly feasible point."""

    lo: Fraction
    hi: Fraction
    witness: tuple[Fraction, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty interval")


@dataclass
class _Candidate:
    lo: Fraction
    hi: Fraction
    points: list  # rational points (x1, y) bracketing the candidate


def _quadratic_roots(alpha: Fraction, beta: Fraction, gamma: Fraction, width: Fraction):
    """Enclosures [lo, hi] of the real roots of alpha t^2 + beta t + gamma."""
    if alpha == 0:
        if beta == 0:
            return []
        r = -gamma / beta
        return [(r, r)]
    disc = beta * beta - 4 * alpha * gamma
    if disc < 0:
        return []
    s_lo, s_hi = sqrt_enclosure(disc, width * 2 * abs(alpha))
    if s_lo == s_hi:
        return [((-beta - s_lo) / (2 * alpha),) * 2, ((-beta + s_lo) / (2 * alpha),) * 2]
    out = []
    for sign in (-1, 1):
        ends = sorted([(-beta + sign * s_lo) / (2 * alpha), (-beta + sign * s_hi) / (2 * alpha)])
        out.append(tuple(ends))
    return out


def _poly_along(p: ReducedProgram, p0, d):
    """Coefficients of t -> Q(p0 + t d)."""
    x0, y0 = p0
    dx, dy = d
    c_xx = -p.a
    c_xy = Fraction(8)
    c_yy = 12 - 4 * p.a
    alpha = c_xx * dx * dx + c_xy * dx * dy + c_yy * dy * dy
    beta = 2 * c_xx * x0 * dx + c_xy * (x0 * dy + y0 * dx) + 2 * c_yy * y0 * dy
    gamma = p.q(x0, y0)
    return alpha, beta, gamma


_VERTICES = [(Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)), (Fraction(0), Fraction(1, 4))]
_EDGES = [(_VERTICES[0], _VERTICES[1]), (_VERTICES[0], _VERTICES[2]), (_VERTICES[1], _VERTICES[2])]


def _in_triangle(x1, y) -> bool:
    return x1 >= 0 and y >= 0 and x1 + 4 * y <= 1


def _segment_candidates(p: ReducedProgram, p0, d, t_range, value: Callable, width):
    """Points p0 + t d with Q = rhs and t inside t_range (None = unbounded)."""
    alpha, beta, gamma = _poly_along(p, p0, d)
    # objectives move by at most 5*max|d| per unit of t
    t_width = width / (5 * max(abs(d[0]), abs(d[1])))
    out = []
    for t_lo, t_hi in _quadratic_roots(alpha, beta, gamma - p.rhs, t_width):
        pts = [(p0[0] + t * d[0], p0[1] + t * d[1]) for t in (t_lo, t_hi)]
        inside = [_in_triangle(*q) for q in pts]
        if t_range is not None:
            inside = [ok and t_range[0] <= t <= t_range[1] for ok, t in zip(inside, (t_lo, t_hi))]
        if not any(inside):
            continue
        if not all(inside):
            # the root sits on the triangle boundary; that point is a vertex or
            # an edge root already listed
            continue
        vals = sorted(value(*q) for q in pts)
        out.append(_Candidate(vals[0], vals[1], pts))
    return out


def _candidates(p: ReducedProgram, width: Fraction) -> list[_Candidate]:
    value = p.value
    cands: list[_Candidate] = []
    for v in _VERTICES:
        if p.feasible(*v):
            cands.append(_Candidate(value(*v), value(*v), [v]))
    # one linear constraint active together with Q = rhs
    for a, b in _EDGES:
        d = (b[0] - a[0], b[1] - a[1])
        cands.extend(_segment_candidates(p, a, d, (Fraction(0), Fraction(1)), value, width))
    if p.objective == "max_f":
        # stationary points of Q itself: interior (the origin) and along each edge
        for a, b in _EDGES:
            d = (b[0] - a[0], b[1] - a[1])
            alpha, beta, _ = _poly_along(p, a, d)
            if alpha != 0:
                t = -beta / (2 * alpha)
                if 0 <= t <= 1:
                    pt = (a[0] + t * d[0], a[1] + t * d[1])
                    if p.feasible(*pt):
                        cands.append(_Candidate(value(*pt), value(*pt), [pt]))
        if p.feasible(Fraction(0), Fraction(0)):
            cands.append(_Candidate(value(0, 0), value(0, 0), [(Fraction(0), Fraction(0))]))
        return cands
    # linear objective c.(x1, y): tangency of the level line with Q = rhs,
    # i.e. c parallel to grad Q = (8y - 2a x1, 8x1 + 2(12 - 4a) y)
    c = {"min_x1": (1, 0), "max_x1": (1, 0), "max_x0": (1, 4)}[p.objective]
    c1, c2 = Fraction(c[0]), Fraction(c[1])
    cyy = 12 - 4 * p.a
    # c1*(8 x1 + 2 cyy y) - c2*(8 y - 2a x1) = 0
    kx = 8 * c1 + 2 * p.a * c2
    ky = 2 * cyy * c1 - 8 * c2
    if kx == 0 and ky == 0:
        return cands
    direction = (-ky, kx) if (-ky, kx) != (0, 0) else (Fraction(1), Fraction(0))
    cands.extend(_segment_candidates(p, (Fraction(0), Fraction(0)), direction, None, value, width))
    return cands


def solve_reduced(p: ReducedProgram, width: Fraction = ENCLOSURE_WIDTH) -> CertifiedInterval:
    cands = _candidates(p, width)
    if not cands:
        raise InfeasibleProgram(f"{p.objective}: no feasible point with rhs = {p.rhs}")
    minimise = p.objective == "min_x1"
    if minimise:
        best = min(cands, key=lambda c: (c.lo, c.hi))
        lo = min(c.lo for c in cands)
        hi = min(c.hi for c in cands)
    else:
        best = max(cands, key=lambda c: (c.hi, c.lo))
        lo = max(c.lo for c in cands)
        hi = max(c.hi for c in cands)
    witness = None
    for x1, y in best.points:
        if p.feasible(x1, y):
            f = p.value(x1, y) if p.objective == "max_f" else Fraction(0)
            witness = (1 - x1 - 4 * y, x1, y, f)
            break
    if witness is None:
        raise ArithmeticError("no exactly feasible rational point next to the optimum")
    return CertifiedInterval(lo, hi, witness)


def closed_form_x1(rhs: Fraction, width: Fraction = ENCLOSURE_WIDTH):
    """Enclosures of 1/5 -+ sqrt((0.004 - rhs)/6.225), valid for a = 3.98."""
    s_lo, s_hi = sqrt_enclosure((dec("0.004") - rhs) / dec("6.225"), width)
    return (Fraction(1, 5) - s_hi, Fraction(1, 5) - s_lo), (Fraction(1, 5) + s_lo, Fraction(1, 5) + s_hi)


def closed_form_x0(rhs: Fraction, width: Fraction = ENCLOSURE_WIDTH):
    """Enclosure of 1 - sqrt(rhs/0.004), the largest admissible x0 for a = 3.98."""
    s_lo, s_hi = sqrt_enclosure(rhs / dec("0.004"), width)
    return 1 - s_hi, 1 - s_lo


@dataclass(frozen=True)
class QPBounds:
    rhs: Fraction
    x1_min: CertifiedInterval
    x1_max: CertifiedInterval
    x0_max: CertifiedInterval
    f_max: CertifiedInterval

    def to_json(self) -> dict:
        from .rational import rational_json

        def iv(c):
            return {"lo": rational_json(c.lo), "hi": rational_json(c.hi),
                    "witness": [rational_json(w) for w in c.witness]}

        return {
            "rhs": rational_json(self.rhs),
            "x1_min": iv(self.x1_min),
            "x1_max": iv(self.x1_max),
            "x0_max": iv(self.x0_max),
            "f_max": iv(self.f_max),
        }


def qp_bounds(fc: FlagConstants, mode: str = "derived") -> QPBounds:
    rhs = rhs_value(fc, mode)
    return QPBounds(
        rhs,
        *(solve_reduced(ReducedProgram(obj, rhs, fc.a)) for obj in OBJECTIVES),
    )


# ---------------------------------------------------------------- symmetrisation

def symmetrize(sample: tuple, f: Fraction) -> tuple[tuple[Fraction, ...], Fraction]:
    x = [Fraction(v) for v in sample]
    rest = (1 - x[0] - x[1]) / 4
    return (x[0], x[1], rest, rest, rest, rest), Fraction(0)


def symmetrization_check(sample: tuple, f, rhs: Fraction, a: Fraction = dec("3.98")) -> bool:
    """Is the point with x2..x5 equalised and f = 0 still feasible?

    ``sample`` is (x0, ..., x5).  Raises ValueError when the sample itself
    violates the constraints (a precondition, not a lemma failure).
    """
    x = tuple(Fraction(v) for v in sample)
    f = Fraction(f)
    if len(x) != 6 or sum(x) != 1 or min(x) < 0 or f < 0:
        raise ValueError("sample must be six non-negative class sizes summing to 1 and f >= 0")
    if main3_lhs(x, f, a) < rhs:
        raise ValueError("sample violates the profile constraint")
    xs, fs = symmetrize(x, f)
    return xs[1] == x[1] and xs[0] == x[0] and main3_lhs(xs, fs, a) >= rhs

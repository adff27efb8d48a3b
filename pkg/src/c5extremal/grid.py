"""Certified grid maximisation of the outside-vertex pentagon bound.

A vertex outside the five classes has a_i n neighbours and b_i n
non-neighbours in class i, with a_i + b_i = cap.  The number of pentagons
through it, over n^4, is at most

    f(a, b) = sum_i a_i b_{i+1} b_{i+2} a_{i+3} + 1/4 sum_i a_i^2 b_i^2

subject to b_{i+1} + b_{i+4} + a_{i+2} + a_{i+3} >= 0.081 for every i.
On the lattice a_i = u_i cap/s, b_i = (s - u_i) cap/s the objective is the
integer

    F = 4 sum_i u_i v_{i+1} v_{i+2} u_{i+3} + sum_i u_i^2 v_i^2,  v = s - u,

times cap^4 / (4 s^4), so the whole search runs in exact 64-bit integers.
Grid values are turned into a bound on the continuous maximum with a
gradient bound times the covering radius.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numba
import numpy as np

from .rational import dec

CAP = dec("0.21")
THRESHOLD = dec("0.081")
MODES = ("strict", "relaxed", "unconstrained")
NO_CONSTRAINT = -(1 << 40)


@dataclass(frozen=True)
class GridSpec:
    s: int
    cap: Fraction = CAP

    def __post_init__(self):
        if self.s < 1:
            raise ValueError("need at least one step per axis")
        object.__setattr__(self, "cap", Fraction(self.cap))

    @property
    def t(self) -> Fraction:
        return self.cap / self.s

    @property
    def scale(self) -> Fraction:
        """Objective value of one unit of F."""
        return self.t ** 4 / 4


def relax_for(spec: GridSpec, mode: str) -> Fraction | None:
    if mode == "strict":
        return Fraction(0)
    if mode == "relaxed":
        # every constraint sums four coordinates, each within t/2 of a grid value
        return 2 * spec.t
    if mode == "unconstrained":
        return None
    raise ValueError(f"mode must be one of {MODES}")


def lattice_threshold(spec: GridSpec, relax: Fraction | None) -> int:
    """Smallest integer S with S*cap/s >= 0.081 - relax (constraint sums in lattice units)."""
    if relax is None:
        return NO_CONSTRAINT
    need = (THRESHOLD - Fraction(relax)) / spec.t
    return max(math.ceil(need), NO_CONSTRAINT)


def objective_int(u: Sequence[int], s: int) -> int:
    v = [s - x for x in u]
    cross = sum(u[i] * v[(i + 1) % 5] * v[(i + 2) % 5] * u[(i + 3) % 5] for i in range(5))
    return 4 * cross + sum(u[i] ** 2 * v[i] ** 2 for i in range(5))


def objective_exact(u: Sequence[int], spec: GridSpec) -> Fraction:
    if len(u) != 5 or not all(0 <= x <= spec.s for x in u):
        raise ValueError(f"{tuple(u)} is not a lattice point for s = {spec.s}")
    return objective_int(u, spec.s) * spec.scale


def objective_real(a: Sequence, b: Sequence) -> Fraction:
    """The objective written directly in the neighbour fractions."""
    cross = sum(a[i] * b[(i + 1) % 5] * b[(i + 2) % 5] * a[(i + 3) % 5] for i in range(5))
    return cross + Fraction(1, 4) * sum(a[i] ** 2 * b[i] ** 2 for i in range(5))


def constraint_sums(u: Sequence[int], s: int) -> list[int]:
    v = [s - x for x in u]
    return [v[(i + 1) % 5] + v[(i + 4) % 5] + u[(i + 2) % 5] + u[(i + 3) % 5] for i in range(5)]


def feasible(u: Sequence[int], spec: GridSpec, relax) -> bool:
    """All five constraints with right-hand side 0.081 - relax, compared exactly."""
    thr = THRESHOLD - Fraction(relax)
    return all(Fraction(S) * spec.t >= thr for S in constraint_sums(u, spec.s))


def gradient_bound(spec: GridSpec) -> Fraction:
    """Bound on a partial derivative of the objective: cap^3 + 2 cap^3 / 27.

    The two cross terms through a_1 together contribute at most cap^3 and the
    square term's derivative a b^2 / 2 is at most 2 cap^3 / 27.
    """
    c3 = spec.cap ** 3
    return c3 + 2 * c3 / 27


# ---------------------------------------------------------------- kernel

@numba.njit(cache=True, nogil=True)
def _orbit_min(p, s):
    """Lexicographically least image of p under rotations and reflections."""
    best = np.empty(5, np.int64)
    cur = np.empty(5, np.int64)
    first = True
    for refl in range(2):
        for rot in range(5):
            for k in range(5):
                if refl == 0:
                    cur[k] = p[(k + rot) % 5]
                else:
                    cur[k] = p[(rot - k) % 5]
            if first:
                best[:] = cur
                first = False
            else:
                for k in range(5):
                    if cur[k] != best[k]:
                        if cur[k] < best[k]:
                            best[:] = cur
                        break
    return best


@numba.njit(cache=True, nogil=True)
def _lex_less(a, b):
    for k in range(5):
        if a[k] != b[k]:
            return a[k] < b[k]
    return False


@numba.njit(cache=True, nogil=True)
def _slab(u0, s, T, sym, quart, out_arg):
    """Best F over lattice points with first coordinate u0.

    Returns (best F or -1, evaluated count); the argmax goes to out_arg.
    With sym, only points with u0 = max and u1 >= u4 are visited (every
    dihedral orbit has such a point) and argmaxes are stored as orbit minima.
    """
    best = np.int64(-1)
    count = np.int64(0)
    p = np.empty(5, np.int64)
    v0 = s - u0
    top = u0 if sym else s
    p[0] = u0
    for u1 in range(top + 1):
        v1 = s - u1
        for u2 in range(top + 1):
            v2 = s - u2
            for u3 in range(top + 1):
                v3 = s - u3
                # constraint 4 does not involve u4
                if v0 + v3 + u1 + u2 < T:
                    continue
                lo = 0
                hi = top
                if sym and u1 < hi:
                    hi = u1
                # constraint 0: (s - u4) + v1 + u2 + u3 >= T
                c = s + v1 + u2 + u3 - T
                if c < hi:
                    hi = c
                # constraint 3: (s - u4) + v2 + u0 + u1 >= T
                c = s + v2 + u0 + u1 - T
                if c < hi:
                    hi = c
                # constraint 1: v2 + v0 + u3 + u4 >= T
                c = T - v2 - v0 - u3
                if c > lo:
                    lo = c
                # constraint 2: v3 + v1 + u4 + u0 >= T
                c = T - v3 - v1 - u0
                if c > lo:
                    lo = c
                if lo > hi:
                    continue
                count += hi - lo + 1
                fixed = 4 * u0 * v1 * v2 * u3 + u0 * u0 * v0 * v0 + u1 * u1 * v1 * v1 \
                    + u2 * u2 * v2 * v2 + u3 * u3 * v3 * v3
                # u1 v2 v3 u4 + v0 v1 u2 u4 + u2 v3 u0 (s-u4) + u3 v0 u1 (s-u4)
                slope_u = u1 * v2 * v3 + v0 * v1 * u2
                slope_v = u2 * v3 * u0 + u3 * v0 * u1
                base = fixed + 4 * slope_v * s
                slope = 4 * (slope_u - slope_v)
                for u4 in range(lo, hi + 1):
                    val = base + slope * u4 + quart[u4]
                    if val > best:
                        best = val
                        p[1] = u1
                        p[2] = u2
                        p[3] = u3
                        p[4] = u4
                        if sym:
                            out_arg[:] = _orbit_min(p, s)
                        else:
                            out_arg[:] = p
                    elif sym and val == best:
                        p[1] = u1
                        p[2] = u2
                        p[3] = u3
                        p[4] = u4
                        q = _orbit_min(p, s)
                        if _lex_less(q, out_arg):
                            out_arg[:] = q
    return best, count


def _run_slab(args):
    u0, s, T, sym, quart = args
    arg = np.zeros(5, np.int64)
    best, count = _slab(u0, s, T, sym, quart, arg)
    return int(best), int(count), tuple(int(x) for x in arg)


@dataclass(frozen=True)
class GridResult:
    s: int
    mode: str
    max_value: Fraction
    max_int: int
    argmax: tuple[int, ...]
    evaluated: int
    symmetry: bool = field(compare=False)

    def to_json(self) -> dict:
        from .rational import rational_json

        return {
            "steps": self.s,
            "mode": self.mode,
            "max_value": rational_json(self.max_value),
            "argmax": list(self.argmax),
            "evaluated": self.evaluated,
            "symmetry": self.symmetry,
        }


def default_threads() -> int:
    return os.cpu_count() or 1


def grid_max(spec: GridSpec, mode: str = "strict", symmetry: bool = True, threads: int | None = None) -> GridResult:
    """Exact maximum of the lattice objective over points admitted by ``mode``.

    Ties are broken towards the lexicographically least argmax, so the
    result does not depend on ``symmetry`` or ``threads``.  ``evaluated``
    counts the points actually scored, so it does depend on ``symmetry``.
    """
    return _grid_max_cached(spec, mode, symmetry, threads or default_threads())


def _grid_max_cached(spec, mode, symmetry, threads):
    key = (spec, mode, symmetry)
    hit = _GRID_CACHE.get(key)
    if hit is not None:
        return hit
    result = _compute_grid(spec, mode, symmetry, threads)
    _GRID_CACHE.setdefault(key, result)
    return result


_GRID_CACHE: dict = {}


def _compute_grid(spec: GridSpec, mode: str, symmetry: bool, threads: int) -> GridResult:
    if spec.s > 400:
        raise ValueError("grid search is capped at s = 400")
    s = spec.s
    T = lattice_threshold(spec, relax_for(spec, mode))
    quart = np.array([(u * (s - u)) ** 2 for u in range(s + 1)], dtype=np.int64)
    jobs = [(u0, s, T, symmetry, quart) for u0 in range(s + 1)]
    if threads <= 1:
        results = [_run_slab(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_run_slab, jobs))
    best = -1
    arg = None
    total = 0
    for val, count, a in results:
        total += count
        if val < 0:
            continue
        if val > best or (val == best and a < arg):
            best, arg = val, a
    if arg is None:
        raise ValueError(f"no lattice point is admissible in {mode} mode")
    value = best * spec.scale
    assert objective_exact(arg, spec) == value
    return GridResult(s, mode, value, best, arg, total, symmetry)


def clear_cache():
    _GRID_CACHE.clear()


# ---------------------------------------------------------------- certification

UNIFORM_VERTEX_FLOOR = Fraction(1, 624)  # (1/26) / 4!
PRINTED_LIPSCHITZ = dec("0.001")


@dataclass(frozen=True)
class X0ClaimReport:
    s: int
    lipschitz: Fraction
    grid_max: Fraction
    correction: Fraction
    total: Fraction
    threshold: Fraction
    passed: bool
    relaxed_grid_max: Fraction | None = None
    relaxed_total: Fraction | None = None

    def to_json(self) -> dict:
        from .rational import rational_json

        out = {
            "steps": self.s,
            "lipschitz": rational_json(self.lipschitz),
            "grid_max": rational_json(self.grid_max),
            "correction": rational_json(self.correction),
            "total": rational_json(self.total),
            "threshold": rational_json(self.threshold),
            "pass": self.passed,
        }
        if self.relaxed_total is not None:
            out["relaxed_grid_max"] = rational_json(self.relaxed_grid_max)
            out["relaxed_total"] = rational_json(self.relaxed_total)
            out["relaxed_pass"] = self.relaxed_total < self.threshold
        return out


def certify_x0_claim(
    spec: GridSpec,
    lipschitz: Fraction,
    with_relaxed: bool = False,
    symmetry: bool = True,
    threads: int | None = None,
) -> X0ClaimReport:
    """Grid maximum plus 5 * (t/2) * L, compared with the per-vertex floor 1/624.

    With ``with_relaxed`` the same bound is also formed from the relaxed-mode
    maximum, which covers boxes straddling the feasible boundary.
    """
    lipschitz = Fraction(lipschitz)
    correction = 5 * (spec.t / 2) * lipschitz
    g = grid_max(spec, "strict", symmetry, threads).max_value
    total = g + correction
    rg = rt = None
    if with_relaxed:
        rg = grid_max(spec, "relaxed", symmetry, threads).max_value
        rt = rg + correction
    return X0ClaimReport(spec.s, lipschitz, g, correction, total, UNIFORM_VERTEX_FLOOR,
                         total < UNIFORM_VERTEX_FLOOR, rg, rt)

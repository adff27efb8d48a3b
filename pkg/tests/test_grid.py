import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from c5extremal.grid import (
    CAP,
    GridSpec,
    PRINTED_LIPSCHITZ,
    UNIFORM_VERTEX_FLOOR,
    certify_x0_claim,
    clear_cache,
    constraint_sums,
    feasible,
    gradient_bound,
    grid_max,
    objective_exact,
    objective_int,
    objective_real,
    relax_for,
)
from c5extremal.rational import dec


def test_objective_examples():
    spec = GridSpec(10)
    assert objective_exact((0,) * 5, spec) == 0
    assert objective_exact((10, 0, 0, 10, 0), spec) == CAP ** 4 == dec("0.00194481")
    half = Fraction(21, 200)
    assert objective_exact((5,) * 5, spec) == 5 * half ** 4 * Fraction(5, 4)


def test_objective_rejects_off_lattice():
    with pytest.raises(ValueError):
        objective_exact((11, 0, 0, 0, 0), GridSpec(10))


def test_objective_integer_matches_rational_formula():
    rng = random.Random(5)
    for _ in range(10 ** 4):
        s = rng.choice([7, 100, 200])
        spec = GridSpec(s)
        u = [rng.randint(0, s) for _ in range(5)]
        a = [x * spec.t for x in u]
        b = [CAP - x for x in a]
        assert objective_exact(u, spec) == objective_real(a, b)


def test_objective_fits_in_64_bits():
    s = 400
    assert objective_int((s, 0, 0, s, 0), s) < 2 ** 63
    assert 4 * 5 * s ** 4 + 5 * s ** 4 // 16 < 2 ** 63


def test_feasible_examples():
    spec = GridSpec(10)
    assert not feasible((10, 0, 0, 10, 0), spec, 0)
    assert feasible((5,) * 5, spec, 0)
    assert all(S * spec.t == dec("0.42") for S in constraint_sums((5,) * 5, 10))
    assert feasible((10, 0, 0, 10, 0), spec, 1)


def _brute(spec, mode):
    relax = relax_for(spec, mode)
    best = None
    for u in itertools.product(range(spec.s + 1), repeat=5):
        if relax is not None and not feasible(u, spec, relax):
            continue
        val = objective_exact(u, spec)
        if best is None or val > best[0]:
            best = (val, u)
    return best


@pytest.mark.parametrize("s", [4, 6])
@pytest.mark.parametrize("mode", ["strict", "relaxed", "unconstrained"])
def test_kernel_against_brute_force(s, mode):
    spec = GridSpec(s)
    val, arg = _brute(spec, mode)
    res = grid_max(spec, mode)
    assert res.max_value == val and res.argmax == arg


@pytest.mark.parametrize("s", [4, 10, 20])
@pytest.mark.parametrize("mode", ["strict", "relaxed", "unconstrained"])
def test_symmetry_reduction_is_exact(s, mode):
    spec = GridSpec(s)
    on = grid_max(spec, mode, symmetry=True)
    off = grid_max(spec, mode, symmetry=False)
    assert (on.max_value, on.argmax) == (off.max_value, off.argmax)
    assert on.evaluated < off.evaluated


@pytest.mark.parametrize("s", [10, 20, 37])
def test_modes_are_monotone(s):
    spec = GridSpec(s)
    vals = [grid_max(spec, m).max_value for m in ("strict", "relaxed", "unconstrained")]
    assert vals[0] <= vals[1] <= vals[2]


def test_thread_count_independence():
    spec = GridSpec(30)
    results = []
    for threads in (1, 4, 8):
        clear_cache()
        results.append(grid_max(spec, "strict", threads=threads))
    assert len({(r.max_value, r.argmax, r.evaluated) for r in results}) == 1


def test_argmax_value_recomputes():
    res = grid_max(GridSpec(25), "strict")
    assert objective_exact(res.argmax, GridSpec(25)) == res.max_value
    assert feasible(res.argmax, GridSpec(25), 0)


def test_gradient_bound_exact():
    assert gradient_bound(GridSpec(100)) == Fraction(9947, 10 ** 6)
    assert gradient_bound(GridSpec(100, cap=0)) == 0


def test_gradient_bound_sampling():
    rs = np.random.default_rng(11)
    cap = float(CAP)
    m = 10 ** 6
    a = rs.uniform(0, cap, size=(m, 5))
    h = 1e-6

    def f(a, b):
        cross = sum(a[:, i] * b[:, (i + 1) % 5] * b[:, (i + 2) % 5] * a[:, (i + 3) % 5] for i in range(5))
        return cross + 0.25 * (a * a * b * b).sum(axis=1)

    bound = float(gradient_bound(GridSpec(1)))
    # b held fixed, as in the term-wise bound
    b = cap - a
    ap, am = a.copy(), a.copy()
    ap[:, 0] += h
    am[:, 0] -= h
    fixed_b = (f(ap, b) - f(am, b)) / (2 * h)
    # b = cap - a moving with a, as along a lattice axis
    moving = (f(ap, cap - ap) - f(am, cap - am)) / (2 * h)
    assert fixed_b.max() <= bound + 1e-9
    assert np.abs(moving).max() <= bound + 1e-9


def test_grid_guard():
    with pytest.raises(ValueError):
        grid_max(GridSpec(401))
    with pytest.raises(ValueError):
        GridSpec(0)


@pytest.mark.slow
def test_s100_values_frozen():
    spec = GridSpec(100)
    strict = grid_max(spec, "strict")
    assert strict.argmax == (9, 10, 90, 50, 90)
    assert strict.max_value == objective_exact((9, 10, 90, 50, 90), spec)
    assert abs(float(strict.max_value) - 0.001368984631151025) < 1e-15
    relaxed = grid_max(spec, "relaxed")
    assert relaxed.argmax == (9, 9, 90, 50, 91)
    unc = grid_max(spec, "unconstrained")
    assert unc.max_value >= CAP ** 4


@pytest.mark.slow
def test_certificate_s100():
    spec = GridSpec(100)
    printed = certify_x0_claim(spec, PRINTED_LIPSCHITZ)
    assert printed.passed and printed.total < dec("0.00158") < UNIFORM_VERTEX_FLOOR
    assert printed.correction == 5 * (spec.t / 2) * PRINTED_LIPSCHITZ
    derived = certify_x0_claim(spec, gradient_bound(spec), with_relaxed=True)
    # the lattice maximum is well below the printed 0.00157, so even the
    # recomputed gradient bound clears 1/624 at s = 100
    assert derived.passed
    assert derived.relaxed_total < UNIFORM_VERTEX_FLOOR
    assert UNIFORM_VERTEX_FLOOR == Fraction(1, 26) / 24

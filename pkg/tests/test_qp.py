import random
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import minimize

from c5extremal.qp import (
    FlagConstants,
    InfeasibleProgram,
    PRINTED_RHS,
    ReducedProgram,
    closed_form_x0,
    closed_form_x1,
    derive_main_threshold,
    main3_lhs,
    max_funky_degree_bound,
    qp_bounds,
    solve_reduced,
    symmetrization_check,
)
from c5extremal.rational import dec, decimal_str, sqrt_enclosure

FC = FlagConstants()


def test_main_threshold():
    t = derive_main_threshold(FC)
    assert t > dec("0.003979")
    assert decimal_str(t, 10) == "0.003979278343"
    assert derive_main_threshold(FlagConstants(diff_lower=0)) == 0


def test_rhs_must_be_positive():
    with pytest.raises(ValueError):
        ReducedProgram("max_x1", Fraction(0))
    with pytest.raises(ValueError):
        ReducedProgram("nonsense", Fraction(1, 1000))


def test_infeasible_program():
    with pytest.raises(InfeasibleProgram):
        solve_reduced(ReducedProgram("max_x1", dec("0.005")))


@pytest.mark.parametrize("mode", ["derived", "printed"])
def test_bounds_match_closed_forms(mode):
    b = qp_bounds(FC, mode)
    (lo1, hi1), (lo2, hi2) = closed_form_x1(b.rhs)
    assert b.x1_min.lo <= hi1 and lo1 <= b.x1_min.hi
    assert b.x1_max.lo <= hi2 and lo2 <= b.x1_max.hi
    lo0, hi0 = closed_form_x0(b.rhs)
    assert b.x0_max.lo <= hi0 and lo0 <= b.x0_max.hi
    for iv in (b.x1_min, b.x1_max, b.x0_max, b.f_max):
        assert iv.hi - iv.lo <= Fraction(1, 10 ** 12)


def test_derived_bounds_meet_printed_constants():
    b = qp_bounds(FC, "derived")
    assert dec("0.19816") < b.x1_min.lo and b.x1_max.hi < dec("0.20184")
    # endpoints sit next to 1/5 -+ sqrt((0.004 - rhs)/6.225)
    (lo1, hi1), (lo2, hi2) = closed_form_x1(b.rhs)
    assert abs(b.x1_min.lo - lo1) < Fraction(2, 10 ** 4)
    assert abs(b.x1_max.hi - hi2) < Fraction(2, 10 ** 4)
    assert b.f_max.hi < dec("0.000011")
    assert b.x0_max.hi < dec("0.0026")


def test_printed_rhs_x0_exceeds_printed_bound():
    b = qp_bounds(FC, "printed")
    assert b.rhs == PRINTED_RHS
    assert b.x0_max.lo > dec("0.0026")
    assert abs(b.x0_max.hi - dec("0.00262845")) < Fraction(1, 10 ** 8)


def test_witnesses_are_feasible():
    for mode in ("derived", "printed"):
        b = qp_bounds(FC, mode)
        for iv in (b.x1_min, b.x1_max, b.x0_max, b.f_max):
            x0, x1, y, f = iv.witness
            assert x0 + x1 + 4 * y == 1 and min(x0, x1, y, f) >= 0
            assert main3_lhs((x0, x1, y, y, y, y), f, FC.a) >= b.rhs


def test_against_numerical_optimiser():
    """Multistart SLSQP on the unreduced program never beats the certified bounds."""
    rhs = float(derive_main_threshold(FC))
    a = float(FC.a)
    b = qp_bounds(FC, "derived")

    def lhs(z):
        x = z[1:6]
        s = x.sum()
        sq = (x * x).sum()
        return (s * s - sq) - 2 * z[6] - a * sq - rhs

    cons = [{"type": "eq", "fun": lambda z: z[:6].sum() - 1}, {"type": "ineq", "fun": lhs}]
    bounds = [(0, 1)] * 7
    rs = np.random.default_rng(0)
    goals = {
        "x1_min": (lambda z: z[1], b.x1_min, -1),
        "x1_max": (lambda z: -z[1], b.x1_max, 1),
        "x0_max": (lambda z: -z[0], b.x0_max, 1),
        "f_max": (lambda z: -z[6], b.f_max, 1),
    }
    for name, (obj, iv, sign) in goals.items():
        best = None
        for _ in range(40):
            z0 = np.concatenate([rs.dirichlet(np.ones(6) * 20), [0.0]])
            z0[0] *= 0.05
            z0[:6] /= z0[:6].sum()
            res = minimize(obj, z0, method="SLSQP", bounds=bounds, constraints=cons,
                           options={"ftol": 1e-14, "maxiter": 500})
            if res.success and lhs(res.x) > -1e-12:
                val = -res.fun if sign > 0 else res.fun
                best = val if best is None else (max(best, val) if sign > 0 else min(best, val))
        assert best is not None
        if sign > 0:
            assert best <= float(iv.hi) + 1e-9
            assert best >= float(iv.lo) - 1e-6
        else:
            assert best >= float(iv.lo) - 1e-9
            assert best <= float(iv.hi) + 1e-6


def test_symmetrization_random_samples():
    rng = random.Random(3)
    rhs = derive_main_threshold(FC)
    checked = 0
    while checked < 1000:
        x0 = Fraction(rng.randint(0, 2500), 10 ** 6)
        rest = [Fraction(1, 5) + Fraction(rng.randint(-1500, 1500), 10 ** 6) for _ in range(4)]
        x1 = 1 - x0 - sum(rest)
        x = (x0, x1, *rest)
        if min(x) < 0:
            continue
        f = Fraction(rng.randint(0, 10), 10 ** 6)
        if main3_lhs(x, f, FC.a) < rhs:
            continue
        assert symmetrization_check(x, f, rhs)
        checked += 1


def test_symmetrization_edge_cases():
    rhs = derive_main_threshold(FC)
    sym = (Fraction(0), Fraction(1, 5), Fraction(1, 5), Fraction(1, 5), Fraction(1, 5), Fraction(1, 5))
    assert symmetrization_check(sym, 0, rhs)
    with pytest.raises(ValueError):
        symmetrization_check((Fraction(1), 0, 0, 0, 0, 0), 0, rhs)
    with pytest.raises(ValueError):
        symmetrization_check((0, 0, 0, 0, 0, 0), 0, rhs)


def test_max_funky_degree_bound():
    assert max_funky_degree_bound(FC, dec("0.19816")) == dec("0.0131632")
    assert max_funky_degree_bound(FC, Fraction(1, 5)) == dec("0.004")
    assert max_funky_degree_bound(FC, 0) == 1


def test_sqrt_enclosure():
    for q in (Fraction(2), Fraction(1, 3), dec("0.000123"), Fraction(49, 4)):
        lo, hi = sqrt_enclosure(q, Fraction(1, 10 ** 15))
        assert lo * lo <= q <= hi * hi and hi - lo <= Fraction(1, 10 ** 15)

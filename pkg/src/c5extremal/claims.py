"""Exact recomputation of the numeric steps behind the stability argument.

Every record pairs a printed constant with a value obtained by calling the
module that owns the computation; this module only wires them together.
Printed decimals are stored as the exact rationals of their digits, so a
pass means the printed inequality literally holds.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import chains
from .families import c5_family
from .graph import C5
from .grid import GridSpec, PRINTED_LIPSCHITZ, certify_x0_claim, gradient_bound
from .limits import limit_density
from .qp import FlagConstants, max_funky_degree_bound, qp_bounds, rhs_value
from .rational import dec, rational_json

RELATIONS: dict[str, Callable] = {
    "<=": operator.le,
    "<": operator.lt,
    ">=": operator.ge,
    ">": operator.gt,
    "=": operator.eq,
}

# printed bounds reused as inputs by later steps
X_MIN = dec("0.19816")
X_MAX = dec("0.20184")
X0_MAX = dec("0.0026")
F_MAX = dec("0.000011")
DF_MAX = dec("0.0132")


@dataclass(frozen=True)
class ClaimRecord:
    id: str
    description: str
    printed_value: Fraction
    recomputed: Fraction
    relation: str
    inputs: dict = field(default_factory=dict)
    note: str = ""

    @property
    def passed(self) -> bool:
        return RELATIONS[self.relation](self.recomputed, self.printed_value)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "description": self.description,
            "printed_value": rational_json(self.printed_value),
            "recomputed_value": rational_json(self.recomputed),
            "relation": self.relation,
            "pass": self.passed,
            "inputs": {k: rational_json(v) for k, v in self.inputs.items()},
            "note": self.note,
        }


def verify_claims(
    fc: FlagConstants | None = None,
    rhs_mode: str = "derived",
    printed_steps: int = 100,
    derived_steps: int = 200,
    threads: int | None = None,
) -> list[ClaimRecord]:
    """The eleven ledger records for one choice of right-hand side.

    The grid record runs the strict lattice search at ``printed_steps`` (with
    the printed Lipschitz constant) and at ``derived_steps`` (with the
    recomputed gradient bound); both searches are cached per process.
    """
    fc = fc or FlagConstants()
    rhs = rhs_value(fc, rhs_mode)
    qp = qp_bounds(fc, rhs_mode)
    out: list[ClaimRecord] = []

    out.append(ClaimRecord(
        "main-threshold",
        "pentagon-profile bound from the flag-algebra difference and C5 upper bound",
        dec("0.003979"), rhs_value(fc, "derived"), ">",
        {"diff_lower": fc.diff_lower, "c5_upper": fc.c5_upper, "a": fc.a},
    ))

    lo, hi = qp.x1_min.lo, qp.x1_max.hi
    half = max(Fraction(1, 5) - lo, hi - Fraction(1, 5))
    out.append(ClaimRecord(
        "xbound",
        "class sizes: certified [min x1, max x1] lies inside (0.19816, 0.20184)",
        min(Fraction(1, 5) - X_MIN, X_MAX - Fraction(1, 5)), half, "<",
        {"rhs": rhs, "x1_min_lo": lo, "x1_max_hi": hi},
        "compared as the largest distance from 1/5 against the printed half-width",
    ))

    out.append(ClaimRecord(
        "x0max",
        "largest unclassified mass x0",
        X0_MAX, qp.x0_max.hi, "<",
        {"rhs": rhs},
        "" if rhs_mode == "derived" else
        "the printed rhs 0.003979 is slightly below the derived threshold and admits x0 up to about 0.00263",
    ))

    out.append(ClaimRecord(
        "fmax",
        "largest funky-pair mass f",
        F_MAX, qp.f_max.hi, "<",
        {"rhs": rhs},
    ))

    out.append(ClaimRecord(
        "maxfunky",
        "funky degree of a classified vertex, 1 - (1 + a) x_min",
        DF_MAX, max_funky_degree_bound(fc, X_MIN), "<=",
        {"a": fc.a, "x_min": X_MIN},
    ))

    out.append(ClaimRecord(
        "nofunky.G-side",
        "pentagons through a funky pair before flipping it, over n^3",
        dec("0.0065"), chains.pair_pentagons_upper(X0_MAX, F_MAX, DF_MAX, X_MAX), "<=",
        {"x0": X0_MAX, "f": F_MAX, "d_f": DF_MAX, "x_max": X_MAX},
    ))

    out.append(ClaimRecord(
        "nofunky.G'-side",
        "pentagons through the pair after flipping it, over n^3",
        dec("0.0067"), chains.pair_pentagons_lower(X_MIN, F_MAX, DF_MAX, X_MAX), ">=",
        {"x_min": X_MIN, "f": F_MAX, "d_f": DF_MAX, "x_max": X_MAX},
    ))

    out.append(ClaimRecord(
        "x0funky",
        "funky degree forced on an unclassified vertex joined to a class",
        dec("0.081"), chains.outside_vertex_funky_floor(X0_MAX, X_MIN, X_MAX), ">=",
        {"x0": X0_MAX, "x_min": X_MIN, "x_max": X_MAX},
    ))

    ell = limit_density(C5, c5_family()).density
    share = chains.vertex_share(ell)
    out.append(ClaimRecord(
        "uniform-vertex",
        "pentagons through a vertex of the limit object, over n^4, rounded to the printed 9 decimals",
        dec("0.001602564"), Fraction(round(share * 10 ** 9), 10 ** 9), "=",
        {"limit_density": ell, "vertex_share": share},
    ))

    printed_run = certify_x0_claim(GridSpec(printed_steps), PRINTED_LIPSCHITZ, threads=threads)
    derived_run = certify_x0_claim(GridSpec(derived_steps), gradient_bound(GridSpec(derived_steps)),
                                   threads=threads)
    verdict = (f"s={printed_steps}, L=1/1000: {'pass' if printed_run.passed else 'fail'} against 1/624; "
               f"s={derived_steps}, L={gradient_bound(GridSpec(derived_steps))}: "
               f"{'pass' if derived_run.passed else 'fail'} against 1/624")
    out.append(ClaimRecord(
        "grid-conclusion",
        "pentagons through an unclassified vertex, over n^4: larger of the two certified totals",
        dec("0.00158"), max(printed_run.total, derived_run.total), "<",
        {
            "printed_total": printed_run.total,
            "printed_lipschitz": printed_run.lipschitz,
            "derived_total": derived_run.total,
            "derived_lipschitz": derived_run.lipschitz,
            "threshold": printed_run.threshold,
        },
        verdict,
    ))

    out.append(ClaimRecord(
        "balance-final",
        "leading coefficient of the gain from rebalancing two classes",
        Fraction(0), chains.balance_leading(ell), "<",
        {"limit_density": ell},
    ))
    return out


def grid_runs_pass(records: list[ClaimRecord]) -> tuple[bool, bool]:
    """(printed-constant run passes, derived-constant run passes) from the grid record."""
    rec = next(r for r in records if r.id == "grid-conclusion")
    thr = rec.inputs["threshold"]
    return rec.inputs["printed_total"] < thr, rec.inputs["derived_total"] < thr

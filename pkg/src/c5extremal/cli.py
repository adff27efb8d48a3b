"""Command line entry point.

Every subcommand writes JSON to stdout (a report envelope with ``--json``),
diagnostics to stderr, and exits with 0 on success, 1 when a verification
fails and 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import __version__
from .rational import decimal_str, rational_json

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# ---------------------------------------------------------------- input helpers

def _read_graphs(args) -> list:
    from .graph import Graph6Error, from_graph6

    if args.graph:
        lines = [args.graph]
    elif args.file:
        with open(args.file) as fh:
            lines = fh.read().split()
    else:
        lines = sys.stdin.read().split()
    if not lines:
        raise UsageError("no graph given (positional graph6, --file, or stdin)")
    out = []
    for text in lines:
        try:
            out.append(from_graph6(text))
        except Graph6Error as exc:
            raise UsageError(f"bad graph6 {text!r}: {exc}") from exc
    return out


def _graph_args(p):
    p.add_argument("graph", nargs="?", help="graph6 string (otherwise --file or stdin)")
    p.add_argument("--file", help="file with one graph6 string per line")


def _base_graph(name: str):
    from .blowup import parse_tree, realize

    try:
        return realize(parse_tree(name.upper() if name.lower() == "c5" else name))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _family(name: str):
    from .families import named_family

    try:
        return named_family(name)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# ---------------------------------------------------------------- subcommands
# each returns (inputs, payload, verdict, plain text or None); verdict is None
# for commands that do not verify anything

def cmd_construct(args):
    from .blowup import parse_tree, realize
    from .graph import to_graph6

    try:
        g = realize(parse_tree(args.tree))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    g6 = to_graph6(g)
    return {"tree": args.tree}, {"graph6": g6, "n": g.n}, None, g6


def cmd_recursion_value(args):
    from .blowup import recursion_value

    if args.n < 0:
        raise UsageError("n must be non-negative")
    r = recursion_value(args.n)
    return {"n": args.n}, {"n": args.n, "value": r}, None, str(r)


def cmd_count(args):
    from .counting import count_c5, count_family

    fam = _family(args.pattern)
    graphs = _read_graphs(args)
    counts = [count_c5(g) if fam.label == "C5" else count_family(g, fam) for g in graphs]
    payload = {"pattern": fam.label, "counts": counts}
    return {"pattern": args.pattern}, payload, None, "\n".join(map(str, counts))


def cmd_analyze(args):
    from .counting import best_pentagon, funky_analysis

    graphs = _read_graphs(args)
    out = []
    for g in graphs:
        if args.pentagon:
            z = tuple(args.pentagon)
            score = None
        else:
            z, score = best_pentagon(g, Fraction(args.a))
            if not z:
                raise UsageError("graph has no induced C5")
        try:
            pa = funky_analysis(g, z)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        item = pa.to_json()
        if score is not None:
            item["score"] = rational_json(score)
        out.append(item)
    inputs = {"pentagon": args.pentagon, "a": args.a}
    return inputs, out if len(out) > 1 else out[0], None, None


def cmd_limit_density(args):
    from .limits import limit_density, sample_density

    base = _base_graph(args.base)
    fam = _family(args.pattern)
    res = limit_density(base, fam)
    payload = {
        "base": args.base,
        "pattern": fam.label,
        "density": rational_json(res.density),
        "per_member": [rational_json(d) for d in res.per_member],
    }
    inputs = {"base": args.base, "pattern": args.pattern}
    if args.sample_depth is not None:
        if args.seed is None:
            raise UsageError("--sample-depth needs an explicit --seed")
        if len(fam.members) != 1:
            raise UsageError("sampling is available for single-graph patterns only")
        p, se = sample_density(fam.members[0], args.sample_depth, args.samples, args.seed, base)
        payload["sample"] = {"depth": args.sample_depth, "samples": args.samples,
                             "estimate": round(p, 12), "stderr": round(se, 12)}
        inputs.update(seed=args.seed, sample_depth=args.sample_depth, samples=args.samples)
    return inputs, payload, None, None


def cmd_qp_bounds(args):
    from .qp import FlagConstants, qp_bounds

    b = qp_bounds(FlagConstants(), args.rhs)
    return {"rhs": args.rhs}, b.to_json(), None, None


def cmd_grid_certify(args):
    from .grid import GridSpec, PRINTED_LIPSCHITZ, certify_x0_claim, gradient_bound, grid_max

    if not 1 <= args.steps <= 400:
        raise UsageError("--steps must lie in [1, 400]")
    spec = GridSpec(args.steps)
    sym = args.symmetry == "on"
    res = grid_max(spec, args.mode, sym, args.threads)
    payload = {"grid": res.to_json(), "gradient_bound": rational_json(gradient_bound(spec))}
    verdict = None
    if args.mode == "strict":
        L = gradient_bound(spec) if args.lipschitz == "derived" else PRINTED_LIPSCHITZ
        rep = certify_x0_claim(spec, L, symmetry=sym, threads=args.threads)
        payload["certificate"] = rep.to_json()
        verdict = rep.passed
    inputs = {"steps": args.steps, "mode": args.mode, "lipschitz": args.lipschitz,
              "symmetry": args.symmetry}
    return inputs, payload, verdict, None


def cmd_search(args):
    from .search import exhaustive_C, hill_climb

    if args.exact is not None:
        try:
            r = exhaustive_C(args.exact)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        return {"exact": args.exact}, r.to_json(), None, None
    if args.seed is None:
        raise UsageError("--climb needs an explicit --seed")
    if not 1 <= args.climb <= 64:
        raise UsageError("--climb n must lie in [1, 64]")
    r = hill_climb(args.climb, args.seed, args.iters)
    return {"climb": args.climb, "seed": args.seed, "iters": args.iters}, r.to_json(), None, None


def _ledger(args, rhs):
    from .claims import verify_claims
    from .qp import FlagConstants

    return verify_claims(FlagConstants(), rhs, args.printed_steps, args.derived_steps, args.threads)


def cmd_verify_claims(args):
    records = _ledger(args, args.rhs)
    payload = [r.to_json() for r in records]
    verdict = all(r.passed for r in records)
    table = None
    if args.table:
        rows = [f"{'id':<18} {'relation':<8} {'recomputed':>16} {'printed':>12}  result"]
        for r in records:
            rows.append(f"{r.id:<18} {r.relation:<8} {decimal_str(r.recomputed, 8):>16} "
                        f"{decimal_str(r.printed_value, 8):>12}  {'pass' if r.passed else 'FAIL'}")
        table = "\n".join(rows)
    inputs = {"rhs": args.rhs, "printed_steps": args.printed_steps, "derived_steps": args.derived_steps}
    return inputs, payload, verdict, table


def cmd_report(args):
    from .families import c22111, c31111, c5_family
    from .graph import C5
    from .limits import limit_density
    from .qp import FlagConstants, qp_bounds

    dens = {f.label: rational_json(limit_density(C5, f).density) for f in (c5_family(), c22111(), c31111())}
    ledgers = {m: _ledger(args, m) for m in ("derived", "printed")}
    payload = {
        "limit_densities": dens,
        "qp_bounds": {m: qp_bounds(FlagConstants(), m).to_json() for m in ("derived", "printed")},
        "claims": {m: [r.to_json() for r in recs] for m, recs in ledgers.items()},
    }
    verdict = all(r.passed for r in ledgers["derived"])
    return {"printed_steps": args.printed_steps, "derived_steps": args.derived_steps}, payload, verdict, None


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="c5extremal", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, func, help_):
        q = sub.add_parser(name, help=help_)
        q.set_defaults(func=func)
        out = q.add_mutually_exclusive_group()
        out.add_argument("--json", action="store_true", help="full report envelope")
        out.add_argument("--table", action="store_true", help="human readable output")
        q.add_argument("--no-timestamp", action="store_true", help="omit the timestamp field")
        return q

    q = add("construct", cmd_construct, "realise a blow-up tree as graph6")
    q.add_argument("--tree", required=True)

    q = add("recursion-value", cmd_recursion_value, "R(n) of the balanced recursive construction")
    q.add_argument("n", type=int)

    q = add("count", cmd_count, "induced copies of a pattern family")
    q.add_argument("--pattern", default="c5")
    _graph_args(q)

    q = add("analyze", cmd_analyze, "class partition and funky pairs around a pentagon")
    q.add_argument("--pentagon", type=int, nargs=5, metavar="V")
    q.add_argument("--a", default="3.98", help="weight used to pick the best pentagon")
    _graph_args(q)

    q = add("limit-density", cmd_limit_density, "exact density in the iterated blow-up")
    q.add_argument("--base", default="c5")
    q.add_argument("--pattern", default="c5")
    q.add_argument("--sample-depth", type=int, help="also estimate by sampling at this depth")
    q.add_argument("--samples", type=int, default=100000)
    q.add_argument("--seed", type=int)

    q = add("qp-bounds", cmd_qp_bounds, "certified class-size bounds")
    q.add_argument("--rhs", choices=("printed", "derived"), default="derived")

    q = add("grid-certify", cmd_grid_certify, "exact lattice maximum and Lipschitz certificate")
    q.add_argument("--steps", type=int, default=100)
    q.add_argument("--mode", choices=("strict", "relaxed", "unconstrained"), default="strict")
    q.add_argument("--lipschitz", choices=("printed", "paper", "derived"), default="derived",
                   help="printed constant 1/1000 (alias: paper) or the recomputed gradient bound")
    q.add_argument("--symmetry", choices=("on", "off"), default="on")
    q.add_argument("--threads", type=int)

    q = add("search", cmd_search, "exact C(n) or a hill-climbing witness")
    g = q.add_mutually_exclusive_group(required=True)
    g.add_argument("--exact", type=int, metavar="N")
    g.add_argument("--climb", type=int, metavar="N")
    q.add_argument("--seed", type=int)
    q.add_argument("--iters", type=int, default=1000)

    for name, func, help_ in (("verify-claims", cmd_verify_claims, "recompute the numeric claim ledger"),
                              ("report", cmd_report, "densities, bounds and ledgers in one document")):
        q = add(name, func, help_)
        if name == "verify-claims":
            q.add_argument("--rhs", choices=("printed", "derived"), default="derived")
        q.add_argument("--printed-steps", type=int, default=100)
        q.add_argument("--derived-steps", type=int, default=200)
        q.add_argument("--threads", type=int)
    return p


def _envelope(args, inputs, payload, verdict) -> dict:
    doc = {
        "tool": "c5extremal",
        "tool_version": __version__,
        "command": args.command,
        "inputs": inputs,
        "payload": payload,
    }
    if verdict is not None:
        doc["pass"] = verdict
    if not args.no_timestamp:
        doc["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return doc


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        inputs, payload, verdict, plain = args.func(args)
    except UsageError as exc:
        print(str(exc), file=err)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    if args.json:
        text = json.dumps(_envelope(args, inputs, payload, verdict), indent=2, sort_keys=True)
    elif args.table and plain is None:
        text = json.dumps(payload, indent=2, sort_keys=True)
    elif plain is not None:
        text = plain
    else:
        text = json.dumps(payload, indent=2, sort_keys=True)
    print(text, file=out)
    if verdict is False:
        return EXIT_FAIL
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

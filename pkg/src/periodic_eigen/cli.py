"""Command-line front end.

Every subcommand reads one graph file, prints a single JSON document on
stdout (CSV for ``levelset --format csv``) and reports diagnostics on
stderr. Exit codes: 0 success, 1 graph validation failure, 2 convergence
failure, 3 usage or domain error.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings

import numpy as np

from . import io
from .choquet import DiscreteMeasure, decompose, synthesize
from .dispersion import find_lambda0, lambda_at
from .eigenfunction import build_eigenfunction, to_json as eigenfunction_json
from .errors import (ConvergenceError, DegenerateDegree, EmptySet, GraphValidationError,
                     IrreducibilityError, NoPathInWindow, NoSolution, RankError, TorsionError,
                     WindowTooSmall)
from .graph import harnack_bound, symmetrize, validate
from .levelset import trace_level_set
from .quotient import Sublattice, factor

EXIT_OK, EXIT_INVALID, EXIT_CONVERGENCE, EXIT_USAGE = 0, 1, 2, 3

DOMAIN_ERRORS = (NoSolution, EmptySet, TorsionError, RankError, WindowTooSmall, NoPathInWindow,
                 DegenerateDegree)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad flags; that code is taken by convergence failures."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _floats(text: str) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not all(np.isfinite(vals)):
        raise argparse.ArgumentTypeError("numbers must be finite")
    return vals


def _real(text: str) -> float:
    return _floats(text)[0] if text.strip() else float("nan")


def _cell(text: str):
    """``"a@1,-2"`` -> ``((1, -2), "a")``; ``"a"`` alone is the cell at the origin."""
    name, _, off = text.rpartition("@")
    if not name:
        name, off = text, ""
    try:
        z = tuple(int(x) for x in off.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad cell {text!r}; expected vertex@z1,...,zd")
    return z, name


def _box(text: str):
    """``"-8:8,0:3"`` -> ``((-8, 8), (0, 3))``."""
    out = []
    for part in text.split(","):
        lo, sep, hi = part.partition(":")
        try:
            out.append((int(lo), int(hi)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad window {text!r}; expected lo:hi,...")
        if not sep or out[-1][0] > out[-1][1]:
            raise argparse.ArgumentTypeError(f"bad window {text!r}; expected lo:hi,...")
    return tuple(out)


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        n = 0
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="periodic-eigen",
                description="Positive eigenfunctions of periodic Schrodinger operators.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, help_):
        s = sub.add_parser(name, help=help_)
        s.add_argument("graph", help="graph JSON file")
        return s

    s = cmd("validate", "check a graph; with --symmetrize print the symmetrized graph")
    s.add_argument("--symmetrize", action="store_true")
    s = cmd("lambda", "dispersion value and gradient at alpha")
    s.add_argument("--alpha", type=_floats, required=True)
    s.add_argument("--tol", type=float, default=1e-12)
    s = cmd("lambda0", "maximum of the dispersion function")
    s.add_argument("--tol", type=float, default=1e-9, help="gradient tolerance")
    s = cmd("eigenfunction", "multiplicative eigenfunction with exponent alpha")
    s.add_argument("--alpha", type=_floats, required=True)
    s.add_argument("--tol", type=float, default=1e-12)
    s = cmd("levelset", "trace the level set at lambda")
    s.add_argument("--lambda", dest="lam", type=_real, required=True)
    s.add_argument("--dirs", type=_positive_int, default=64)
    s.add_argument("--tol", type=float, default=1e-10)
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s = cmd("quotient", "factor by a sublattice")
    s.add_argument("--sublattice", required=True)
    s = cmd("harnack", "path-product Harnack constant")
    s.add_argument("--from", dest="source", type=_cell, required=True)
    s.add_argument("--to", dest="target", type=_cell, required=True)
    s.add_argument("--lambda", dest="lam", type=_real, default=0.0)
    s.add_argument("--window", type=_box, default=None, help="search box lo:hi,...")
    s = cmd("decompose", "fit samples by a nonnegative mixture on the level set")
    s.add_argument("--lambda", dest="lam", type=_real, required=True)
    s.add_argument("--samples", required=True, help="window-function JSON file")
    s.add_argument("--dirs", type=_positive_int, default=64)
    s.add_argument("--tol", type=float, default=1e-10)
    s = cmd("synthesize", "tabulate the function represented by a measure")
    s.add_argument("--measure", required=True, help="measure JSON file")
    s.add_argument("--window", type=_box, default=None)
    return p


def _jsonable(x):
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (str, int, float)) or x is None:
        return x
    return str(x)


def _report_json(report) -> dict:
    return {"ok": report.ok,
            "violations": [{"kind": v.kind, "message": v.message,
                            "location": _jsonable(v.location)} for v in report.violations]}


def _require_valid(g):
    report = validate(g)
    if not report.ok:
        raise GraphValidationError(report)


def _check_alpha(g, alpha):
    if len(alpha) != g.dimension:
        raise UsageError(f"--alpha has {len(alpha)} components, graph dimension is {g.dimension}")


def _cell_json(cell):
    return {"offset": list(cell[0]), "vertex": cell[1]}


def run_command(args):
    """Execute parsed arguments; returns ``(exit code, stdout text)``."""
    try:
        g = io.load_graph(args.graph)
    except (OSError, json.JSONDecodeError, io.SchemaError) as exc:
        print(f"error: cannot read graph {args.graph}: {exc}", file=sys.stderr)
        return EXIT_INVALID, ""

    if args.command == "validate":
        if args.symmetrize:
            return EXIT_OK, io.dumps(io.graph_to_json(symmetrize(g)))
        report = validate(g)
        for v in report.violations:
            print(f"{v.kind}: {v.message}", file=sys.stderr)
        return (EXIT_OK if report.ok else EXIT_INVALID), io.dumps(_report_json(report))

    _require_valid(g)
    c = args.command
    if c == "lambda":
        _check_alpha(g, args.alpha)
        pt = lambda_at(g, args.alpha, args.tol)
        doc = {"alpha": pt.alpha, "lambda": pt.lam, "gradient": pt.gradient,
               "theta": pt.theta, "enclosure": [pt.perron.cw_lower, pt.perron.cw_upper]}
    elif c == "lambda0":
        r = find_lambda0(g, grad_tol=args.tol)
        doc = {"lambda0": r.lambda0, "alpha_star": r.alpha_star,
               "gradient_norm": r.gradient_norm, "iterations": r.iterations}
    elif c == "eigenfunction":
        _check_alpha(g, args.alpha)
        doc = eigenfunction_json(build_eigenfunction(g, args.alpha, args.tol))
    elif c == "levelset":
        ls = trace_level_set(g, args.lam, args.dirs, args.tol)
        if args.format == "csv":
            return EXIT_OK, ls.to_csv()
        doc = {"lambda": ls.lam, "center": ls.center,
               "points": [list(p) for p in ls.points], "values": ls.values}
    elif c == "quotient":
        try:
            lat = Sublattice.parse(args.sublattice)
        except ValueError as exc:
            raise UsageError(f"bad --sublattice {args.sublattice!r}: {exc}")
        q = factor(g, lat)
        doc = {"kind": q.kind, "sublattice": [list(r) for r in lat.basis],
               "graph": io.graph_to_json(q.graph)}
    elif c == "harnack":
        for cell in (args.source, args.target):
            if len(cell[0]) != g.dimension:
                raise UsageError(f"cell offset {list(cell[0])} does not have {g.dimension} entries")
            if cell[1] not in g.index:
                raise UsageError(f"unknown vertex {cell[1]!r}")
        h = harnack_bound(g, args.source, args.target, args.lam, args.window)
        doc = {"from": _cell_json(h.source), "to": _cell_json(h.target), "lambda": h.lam,
               "constant": h.constant, "witness_path": [_cell_json(x) for x in h.witness_path]}
    elif c == "decompose":
        samples = io.window_from_json(io.read_json(args.samples), g.vertices)
        m, res = decompose(g, args.lam, samples, args.dirs, args.tol)
        doc = {"measure": m.to_json(), "residual": res}
    elif c == "synthesize":
        m = DiscreteMeasure.from_json(io.read_json(args.measure))
        window = args.window if args.window is not None else ((-4, 4),) * g.dimension
        if len(window) != g.dimension:
            raise UsageError(f"--window has {len(window)} axes, graph dimension is {g.dimension}")
        for alpha, _ in m.atoms:
            _check_alpha(g, alpha)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            f = synthesize(g, m, window)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        doc = io.window_to_json(f)
    else:  # pragma: no cover - argparse rejects unknown commands
        raise UsageError(f"unknown command {c!r}")
    return EXIT_OK, io.dumps(doc)


VALUE_FLAGS = {"--alpha", "--lambda", "--window", "--from", "--to"}


def _glue_values(argv):
    """Attach values such as ``-1,2`` or ``-8:8`` to their flag so argparse
    does not mistake them for options."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") \
                and argv[i + 1][1:2] not in ("-", ""):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(_glue_values(argv))
        code, out = run_command(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GraphValidationError as exc:
        for v in exc.report.violations:
            print(f"{v.kind}: {v.message}", file=sys.stderr)
        return EXIT_INVALID
    except ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except IrreducibilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except DOMAIN_ERRORS as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (io.SchemaError, ValueError, OverflowError, OSError, json.JSONDecodeError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

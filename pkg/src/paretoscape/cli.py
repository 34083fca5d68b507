"""Command-line frontend: run the pipeline, write images and exports.

Exit codes: 0 on success, 1 on usage errors (bad flags, unknown problem,
invalid bounds/resolution), 2 on runtime failures (evaluation blew up,
output path unwritable).  On success a single-line JSON summary goes to
standard output.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional

from .criticality import export_critical_points_json
from .gradients import export_fields_csv
from .grid import EvaluationError
from .landscape import analyze, cost_landscape, export_decomposition_json, \
    export_heights_csv
from .problems import DomainError, UnknownProblemError, get_problem, \
    PROBLEM_FACTORIES
from .render import render

MODES = ("plot", "gfh", "cost", "critical")
FORMATS = ("ppm", "png")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    problem: str
    mode: str = "plot"
    n1: int = 300
    n2: int = 300
    lower: Optional[tuple[float, float]] = None
    upper: Optional[tuple[float, float]] = None
    out: Optional[str] = None
    fmt: str = "ppm"
    export_csv: Optional[str] = None
    export_json: Optional[str] = None
    zero_tol: float = 1e-12
    div_tol: float = 1e-9
    log_scale: bool = True
    workers: int = 1

    def output_path(self) -> str:
        if self.out:
            return self.out
        stem = self.problem.replace(":", "_").replace(",", "_")
        return f"{stem}_{self.mode}.{self.fmt}"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _pair(text: str, flag: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"{flag} expects two comma-separated values, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise UsageError(f"could not parse {flag} {text!r}: {exc}") from exc


def build_parser() -> _Parser:
    p = _Parser(
        prog="paretoscape",
        description="Locate, rank and visualise locally efficient points of "
                    "bi-objective problems on an evaluation grid.")
    p.add_argument("--problem", help="problem name, or bisphere:ax,ay,bx,by")
    p.add_argument("--mode", choices=MODES, default="plot")
    p.add_argument("--resolution", default="300",
                   help="grid points per axis: N or N,M (default 300)")
    p.add_argument("--lower", help="override lower bounds: x1,x2")
    p.add_argument("--upper", help="override upper bounds: x1,x2")
    p.add_argument("--out", help="image output path (default <problem>_<mode>.<fmt>)")
    p.add_argument("--format", choices=FORMATS, default="ppm", dest="fmt")
    p.add_argument("--export-csv", help="write the mode's height/field table as CSV")
    p.add_argument("--export-json", help="write critical points (critical mode) "
                                         "or the efficient-set decomposition as JSON")
    p.add_argument("--zero-tol", type=float, default=1e-12,
                   help="relative zero-gradient tolerance (default 1e-12)")
    p.add_argument("--div-tol", type=float, default=1e-9,
                   help="relative divergence tolerance (default 1e-9)")
    p.add_argument("--no-log-scale", action="store_true",
                   help="linear instead of log height normalisation")
    p.add_argument("--list-problems", action="store_true")
    return p


# flags whose values may start with '-' (negative coordinates); argparse
# would otherwise read "-2,-2" as an option, so glue the value on with '='
_SIGNED_VALUE_FLAGS = ("--lower", "--upper")


def _glue_signed_values(argv):
    out, it = [], iter(argv)
    for token in it:
        if token in _SIGNED_VALUE_FLAGS:
            value = next(it, None)
            if value is None:
                out.append(token)  # let argparse report the missing value
            else:
                out.append(f"{token}={value}")
        else:
            out.append(token)
    return out


def parse_args(argv) -> Optional[RunConfig]:
    """Translate argv into a RunConfig; None means --list-problems handled."""
    args = build_parser().parse_args(_glue_signed_values(argv))
    if args.list_problems:
        for name in sorted(PROBLEM_FACTORIES):
            prob = PROBLEM_FACTORIES[name]()
            box = (f"[{prob.lower[0]:g},{prob.upper[0]:g}] x "
                   f"[{prob.lower[1]:g},{prob.upper[1]:g}]")
            print(f"{name:10s} {box:24s} {prob.note}")
        return None
    if not args.problem:
        raise UsageError("--problem is required (or use --list-problems)")

    res = str(args.resolution).split(",")
    try:
        n1 = int(res[0])
        n2 = int(res[1]) if len(res) > 1 else n1
    except ValueError as exc:
        raise UsageError(f"bad --resolution {args.resolution!r}: {exc}") from exc
    if len(res) > 2:
        raise UsageError(f"--resolution takes N or N,M, got {args.resolution!r}")
    if n1 < 2 or n2 < 2:
        raise UsageError(f"resolution must be at least 2 per axis, got {n1},{n2}")

    return RunConfig(
        problem=args.problem,
        mode=args.mode,
        n1=n1, n2=n2,
        lower=_pair(args.lower, "--lower") if args.lower else None,
        upper=_pair(args.upper, "--upper") if args.upper else None,
        out=args.out,
        fmt=args.fmt,
        export_csv=args.export_csv,
        export_json=args.export_json,
        zero_tol=args.zero_tol,
        div_tol=args.div_tol,
        log_scale=not args.no_log_scale,
    )


def run(config: RunConfig) -> int:
    """Execute grid -> gradients -> criticality -> landscape -> render."""
    problem = get_problem(config.problem)
    result = analyze(
        problem, config.n1, config.n2,
        lower=config.lower, upper=config.upper,
        zero_tol_rel=config.zero_tol, div_tol_rel=config.div_tol,
        workers=config.workers,
        with_cost=(config.mode == "cost"),
    )
    heights = result.cost if config.mode == "cost" else result.heights
    artifact = render(config.mode, heights=heights, critmap=result.critmap,
                      decomposition=result.decomposition,
                      log_scale=config.log_scale)
    if "warning" in artifact.legend:
        print(f"warning: {artifact.legend['warning']}", file=sys.stderr)
    artifact.save(config.output_path(), fmt=config.fmt)

    if config.export_csv:
        if config.mode == "critical":
            export_fields_csv(config.export_csv, result.fields)
        else:
            export_heights_csv(config.export_csv, heights)
    if config.export_json:
        if config.mode == "critical":
            export_critical_points_json(config.export_json, result.critmap,
                                        result.fields)
        else:
            export_decomposition_json(config.export_json, result.decomposition,
                                      result.fields.f1, result.fields.f2)

    print(json.dumps(result.summary()))
    return 0


def main(argv=None) -> int:
    try:
        config = parse_args(sys.argv[1:] if argv is None else argv)
    except (UsageError, UnknownProblemError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if config is None:
        return 0
    try:
        return run(config)
    except (UnknownProblemError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (EvaluationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Exit status: 0 on success or PASS, 1 when a verification FAILs, 2 on bad input.
Every flag can also be set through an ``AL_``-prefixed environment variable
(``AL_M``, ``AL_M_MAX``, ``AL_FORMAT``, ``AL_WORKERS``, ``AL_DIM_CAP``).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import List, Optional

from . import io
from .arith import NotAffZError, format_rational
from .catalog import UnknownBuiltinError, list_builtins, parse_builtin, single_polytope
from .lattice import FitValidationError, count, ehrhart_report, enumerate_points
from .manifold import (
    OVERLAP_COVER,
    GluingError,
    TransportError,
    complex_volume,
    count_inclusion_exclusion,
    count_union_find,
    integral_points,
    validate,
    verify_downstairs,
)
from .poisson import BumpFunction, QuadratureError, decay_report
from .polytope import DimensionCapError, set_dim_cap, volume

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

_INPUT_ERRORS = (
    io.ParseError,
    NotAffZError,
    DimensionCapError,
    UnknownBuiltinError,
    FitValidationError,
    GluingError,
    TransportError,
    QuadratureError,
    FileNotFoundError,
    ValueError,
)


class InputError(Exception):
    pass


def _env(name: str, default):
    return os.environ.get(f"AL_{name}", default)


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default=_env("FORMAT", "text"))
    common.add_argument("--workers", type=int, default=int(_env("WORKERS", 1)))
    common.add_argument("--dim-cap", type=int, default=int(_env("DIM_CAP", 4)))
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="affine-lattice",
        description="Exact lattice-point counts on rational polytopes and integral affine complexes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common], help="count (1/m)Z^n points in a polytope file")
    p.add_argument("path")
    p.add_argument("--m", type=int, default=int(_env("M", 1)))
    p.add_argument("--points", action="store_true", help="also list the points")

    p = sub.add_parser("ehrhart", parents=[common], help="fit the Ehrhart quasi-polynomial")
    p.add_argument("path")
    p.add_argument("--period", type=int, default=None, help="period hint")

    p = sub.add_parser("volume", parents=[common], help="exact volume of a polytope or complex")
    p.add_argument("source", help="polytope/complex file or builtin spec")

    p = sub.add_parser("complex-count", parents=[common], help="count integral points of a complex")
    p.add_argument("source", help="complex file or builtin spec, e.g. torus:2,1")
    p.add_argument("--m", type=int, default=int(_env("M", 1)))
    p.add_argument("--classes", action="store_true", help="list the identified point classes")

    p = sub.add_parser("verify", parents=[common], help="check L_M(m) = vol(M) m^n")
    p.add_argument("source", help="complex file or builtin spec")
    p.add_argument("--m-max", type=int, default=_env("M_MAX", None),
                   help="largest m checked (default: max(10, (n+2)*period))")

    p = sub.add_parser("poisson", parents=[common], help="lattice sums of a bump vs m^n times its integral")
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--center", default=None, help="comma-separated coordinates (default: origin)")
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--amplitude", type=float, default=1.0)
    p.add_argument("--m-values", default="4,8,16,32")
    p.add_argument("--plot-data", default=None, help="write 'm |e(m)|' rows to this file")

    p = sub.add_parser("builtin", parents=[common], help="list or dump built-in complexes")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("name", nargs="?")
    return parser


def _emit(args, data: dict, text: str) -> None:
    if args.format == "structured":
        sys.stdout.write(io.dumps(data))
    else:
        print(text)


def _load_complex(source: str):
    path = Path(source)
    if path.exists():
        data = io.load_json(path)
        if io.is_complex_data(data):
            C = io.load_complex(path)
            report = validate(C)
            if not report.valid:
                raise InputError("invalid complex: " + "; ".join(report.violations))
            return C
        return single_polytope(io.load_polytope(path))
    if source.endswith(".json"):
        raise FileNotFoundError(f"no such file: {source}")
    return parse_builtin(source)


def _check_m(name: str, value: int) -> None:
    if value < 1:
        raise InputError(f"{name} must be >= 1, got {value}")


def cmd_count(args) -> int:
    _check_m("--m", args.m)
    P = io.load_polytope(args.path)
    n_points = count(P, args.m)
    data = {"m": args.m, "count": n_points}
    text = str(n_points)
    if args.points:
        pts = [[format_rational(c) for c in p] for p in enumerate_points(P, args.m)]
        data["points"] = pts
        text += "\n" + "\n".join("(" + ", ".join(p) + ")" for p in pts)
    _emit(args, data, text)
    return EXIT_OK


def cmd_ehrhart(args) -> int:
    P = io.load_polytope(args.path)
    report = ehrhart_report(P, args.period, workers=args.workers)
    q = report.fitted
    data = {"quasi_polynomial": q.to_dict(), "validated_up_to": report.validated_up_to}
    text = f"{q}\nvalidated on all sampled m <= {report.validated_up_to}"
    _emit(args, data, text)
    return EXIT_OK


def cmd_volume(args) -> int:
    path = Path(args.source)
    if path.exists():
        if not io.is_complex_data(io.load_json(path)):
            vol = volume(io.load_polytope(path))
            _emit(args, {"volume": format_rational(vol)}, format_rational(vol))
            return EXIT_OK
    C = _load_complex(args.source)
    vol = complex_volume(C)
    _emit(args, {"volume": format_rational(vol)}, format_rational(vol))
    return EXIT_OK


def cmd_complex_count(args) -> int:
    _check_m("--m", args.m)
    C = _load_complex(args.source)
    n_classes = count_union_find(C, args.m)
    data = {"m": args.m, "count": n_classes}
    lines = [f"L_M({args.m}) = {n_classes}"]
    if C.mode == OVERLAP_COVER:
        ie = count_inclusion_exclusion(C)(args.m)
        data["inclusion_exclusion"] = ie
        lines.append(f"inclusion-exclusion: {ie}")
    if args.classes:
        classes = integral_points(C, args.m)
        data["classes"] = [[str(p) for p in cls.members] for cls in classes]
        lines += [" ~ ".join(str(p) for p in cls.members) for cls in classes]
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    C = _load_complex(args.source)
    if args.m_max is None:
        m_max = max(10, (C.ambient_dim + 2) * C.period)
    else:
        m_max = int(args.m_max)
        _check_m("--m-max", m_max)
    report = verify_downstairs(C, m_max, workers=args.workers)
    _emit(args, report.to_dict(), report.render_text())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_poisson(args) -> int:
    if args.center is not None:
        center = tuple(float(c) for c in args.center.split(","))
        if args.dim is not None and args.dim != len(center):
            raise InputError("--dim does not match the number of center coordinates")
    else:
        center = (0.0,) * (args.dim or 1)
    if len(center) > 3:
        raise InputError("the Poisson demonstration supports n <= 3")
    f = BumpFunction(center, args.radius, args.amplitude)
    m_values = [int(x) for x in args.m_values.split(",") if x.strip()]
    report = decay_report(f, m_values)
    if args.plot_data:
        Path(args.plot_data).write_text(report.plot_data(), encoding="utf-8")
    _emit(args, report.to_dict(), report.render_text())
    return EXIT_OK


def cmd_builtin(args) -> int:
    if args.action == "list":
        names = list_builtins()
        _emit(args, {"builtins": names}, "\n".join(names))
        return EXIT_OK
    if not args.name:
        raise InputError("builtin show needs a name")
    C = parse_builtin(args.name)
    sys.stdout.write(io.dumps(io.complex_to_dict(C)))
    return EXIT_OK


_COMMANDS = {
    "count": cmd_count,
    "ehrhart": cmd_ehrhart,
    "volume": cmd_volume,
    "complex-count": cmd_complex_count,
    "verify": cmd_verify,
    "poisson": cmd_poisson,
    "builtin": cmd_builtin,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        if args.workers < 1:
            raise InputError("--workers must be >= 1")
        set_dim_cap(args.dim_cap)
        return _COMMANDS[args.command](args)
    except (InputError, *_INPUT_ERRORS) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

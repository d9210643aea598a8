"""JSON file formats for polytopes, complexes and quasi-polynomials.

Rationals are always strings (``"p/q"`` or ``"p"``); integer matrices are
row-major nested lists.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Union

from .arith import AffZMap, NotAffZError, format_rational, parse_rational, to_integer
from .manifold import FACET_GLUED, AffineComplex, Gluing
from .polytope import RationalPolytope, from_points


class ParseError(ValueError):
    """Malformed input; the message names the offending field."""

    def __init__(self, message: str, token: Any = None):
        super().__init__(message)
        self.token = token


def dumps(data: Any) -> str:
    """Canonical structured text: parsing and re-dumping gives identical bytes."""
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _rational(value, where: str):
    try:
        return parse_rational(value)
    except ValueError as exc:
        raise ParseError(f"{where}: {exc}", value) from None


def polytope_to_dict(P: RationalPolytope) -> dict:
    return {
        "dim": P.ambient_dim,
        "vertices": [[format_rational(c) for c in v] for v in P.vertices],
    }


def polytope_from_dict(data: dict, where: str = "polytope") -> RationalPolytope:
    if not isinstance(data, dict):
        raise ParseError(f"{where}: expected an object with 'dim' and 'vertices'")
    if "vertices" not in data:
        raise ParseError(f"{where}: missing field 'vertices'")
    verts = data["vertices"]
    if not isinstance(verts, list) or not verts:
        raise ParseError(f"{where}.vertices: expected a nonempty list")
    dim = data.get("dim")
    points = []
    for i, v in enumerate(verts):
        if not isinstance(v, list):
            raise ParseError(f"{where}.vertices[{i}]: expected a list of rationals")
        if dim is not None and len(v) != dim:
            raise ParseError(f"{where}.vertices[{i}]: has {len(v)} coordinates, dim is {dim}")
        points.append([_rational(c, f"{where}.vertices[{i}][{j}]") for j, c in enumerate(v)])
    try:
        return from_points(points)
    except ValueError as exc:
        raise ParseError(f"{where}: {exc}") from None


def gluing_to_dict(g: Gluing) -> dict:
    return {
        "source": g.source,
        "target": g.target,
        "region": polytope_to_dict(g.region),
        "A": [list(row) for row in g.map.linear],
        "b": list(g.map.translation),
    }


def complex_to_dict(C: AffineComplex) -> dict:
    out = {
        "dim": C.ambient_dim,
        "mode": C.mode,
        "charts": [polytope_to_dict(P) for P in C.charts],
        "gluings": [gluing_to_dict(g) for g in C.gluings],
    }
    if C.name:
        out["name"] = C.name
    return out


def complex_from_dict(data: dict) -> AffineComplex:
    """Build a complex; non-Aff_Z gluing maps raise :class:`NotAffZError`."""
    if not isinstance(data, dict) or "charts" not in data:
        raise ParseError("complex: expected an object with 'charts'")
    charts = tuple(polytope_from_dict(c, f"charts[{i}]") for i, c in enumerate(data["charts"]))
    dim = data.get("dim", charts[0].ambient_dim)
    gluings = []
    for i, g in enumerate(data.get("gluings", [])):
        where = f"gluings[{i}]"
        try:
            source, target = int(g["source"]), int(g["target"])
            region = polytope_from_dict(g["region"], f"{where}.region")
            linear = [[_integer(x, f"{where}.A") for x in row] for row in g["A"]]
            translation = [_translation(x, f"{where}.b") for x in g["b"]]
        except KeyError as exc:
            raise ParseError(f"{where}: missing field {exc}") from None
        try:
            mp = AffZMap(linear, translation)
        except NotAffZError as exc:
            raise NotAffZError(f"{where}: {exc}") from None
        gluings.append(Gluing(source, region, mp, target))
    return AffineComplex(dim, charts, tuple(gluings), data.get("mode", FACET_GLUED), data.get("name", ""))


def _integer(value, where):
    try:
        return to_integer(value)
    except ValueError:
        raise NotAffZError(f"{where}: entry {value!r} is not an integer") from None


def _translation(value, where):
    value = _rational(value, where) if isinstance(value, str) else value
    try:
        return to_integer(value)
    except ValueError:
        raise NotAffZError(f"{where}: translation entry {value} is not an integer (b must lie in Z^n)") from None


def load_json(path: Union[str, Path]) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _located(path, build):
    """Run ``build(data)``, prefixing parse errors with the file and line of the bad token."""
    text = Path(path).read_text(encoding="utf-8")
    data = load_json(path)
    try:
        return build(data)
    except ParseError as exc:
        if exc.token is None:
            raise ParseError(f"{path}: {exc}") from None
        needle = json.dumps(exc.token, ensure_ascii=False)
        line = next((k for k, row in enumerate(text.splitlines(), 1) if needle in row), None)
        where = f"{path}: line {line}" if line else str(path)
        raise ParseError(f"{where}: {exc}", exc.token) from None


def is_complex_data(data: dict) -> bool:
    return isinstance(data, dict) and "charts" in data


def load_polytope(path) -> RationalPolytope:
    return _located(path, polytope_from_dict)


def load_complex(path) -> AffineComplex:
    return _located(path, complex_from_dict)

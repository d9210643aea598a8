"""Built-in example complexes."""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Callable, Dict, Iterable, List, Sequence

from .arith import AffZMap, parse_rational
from .manifold import FACET_GLUED, OVERLAP_COVER, AffineComplex, Gluing, recoordinatize, validate
from .polytope import RationalPolytope, affine_image, box, from_points, intersect


class UnknownBuiltinError(ValueError):
    pass


def _checked(C: AffineComplex) -> AffineComplex:
    report = validate(C)
    if not report.valid:
        raise ValueError(f"builtin {C.name} failed validation: {report.violations}")
    return C


def torus(lengths: Sequence[int]) -> AffineComplex:
    """The box prod [0, l_j] with opposite facets glued by translations."""
    lengths = [int(x) for x in lengths]
    if not lengths or any(x < 1 for x in lengths):
        raise ValueError("torus edge lengths must be positive integers")
    n = len(lengths)
    chart = box([0] * n, lengths)
    gluings = []
    for j, ell in enumerate(lengths):
        upper = list(lengths)
        upper[j] = 0
        facet = box([0] * n, upper)
        shift = [0] * n
        shift[j] = ell
        gluings.append(Gluing(0, facet, AffZMap.translate(shift), 0))
    name = "torus(" + ",".join(map(str, lengths)) + ")"
    return _checked(AffineComplex(n, (chart,), tuple(gluings), FACET_GLUED, name))


def klein_bottle() -> AffineComplex:
    """Unit square with (0,y) ~ (1,y) and (x,0) ~ (1-x,1)."""
    square = box([0, 0], [1, 1])
    left = box([0, 0], [0, 1])
    bottom = box([0, 0], [1, 0])
    gluings = (
        Gluing(0, left, AffZMap.translate([1, 0]), 0),
        Gluing(0, bottom, AffZMap(((-1, 0), (0, 1)), (1, 1)), 0),
    )
    return _checked(AffineComplex(2, (square,), gluings, FACET_GLUED, "klein_bottle"))


def single_polytope(P: RationalPolytope) -> AffineComplex:
    return AffineComplex(P.ambient_dim, (P,), (), OVERLAP_COVER, "single_polytope")


def quotient_cover(
    charts: Sequence[RationalPolytope],
    group: Iterable[AffZMap],
    name: str = "",
) -> AffineComplex:
    """Overlap cover of R^n / G from chart lifts and a finite window of group elements.

    A point x of chart i equals the point g(x) of chart j whenever g(x) lies in
    chart j; each (i, j, g) with nonempty overlap becomes one gluing. Charts must
    be small enough that distinct translates under the group are disjoint.
    """
    charts = tuple(charts)
    group = list(group)
    n = charts[0].ambient_dim
    gluings = []
    for i, Pi in enumerate(charts):
        for j, Pj in enumerate(charts):
            for g in group:
                if i == j and g.is_identity():
                    continue
                region = intersect(Pi, affine_image(g.inverse(), Pj))
                if region is None:
                    continue
                if i == j:
                    raise ValueError(f"chart {i} meets its own translate; charts must embed")
                gluings.append(Gluing(i, region, g, j))
    return _checked(AffineComplex(n, charts, tuple(gluings), OVERLAP_COVER, name))


def _translations(periods: Sequence[int], reach: int = 2) -> List[AffZMap]:
    return [
        AffZMap.translate([t * p for t, p in zip(ts, periods)])
        for ts in product(range(-reach, reach + 1), repeat=len(periods))
    ]


def circle_two_arcs() -> AffineComplex:
    """R/Z covered by the arcs [0, 5/8] and [1/2, 9/8]; they overlap in two components."""
    arcs = (box([0], ["5/8"]), box(["1/2"], ["9/8"]))
    return quotient_cover(arcs, _translations([1]), "circle_two_arcs")


def _grid_squares(offsets_x, offsets_y, wx, wy) -> List[RationalPolytope]:
    out = []
    for oy in offsets_y:
        for ox in offsets_x:
            ox, oy = parse_rational(ox), parse_rational(oy)
            out.append(box([ox, oy], [ox + parse_rational(wx), oy + parse_rational(wy)]))
    return out


def torus_square_cover() -> AffineComplex:
    """R^2/Z^2 covered by four squares of side 3/4."""
    squares = _grid_squares([0, "1/2"], [0, "1/2"], "3/4", "3/4")
    return quotient_cover(squares, _translations([1, 1]), "torus_square_cover")


def _klein_group(reach: int = 2) -> List[AffZMap]:
    # (x, y) -> ((-1)^k x + p, y + k)
    out = []
    for k in range(-reach, reach + 1):
        for p in range(-reach, reach + 1):
            out.append(AffZMap((((-1) ** k, 0), (0, 1)), (p, k)))
    return out


def klein_square_cover() -> AffineComplex:
    """Klein bottle R^2 / <(x+1, y), (1-x, y+1)> covered by four squares of side 3/4."""
    squares = _grid_squares([0, "1/2"], [0, "1/2"], "3/4", "3/4")
    return quotient_cover(squares, _klein_group(), "klein_square_cover")


def torus2_strip_cover() -> AffineComplex:
    """R^2 / (2Z x Z), volume 2, covered by four rectangles 5/4 x 3/4."""
    rects = _grid_squares([0, 1], [0, "1/2"], "5/4", "3/4")
    return quotient_cover(rects, _translations([2, 1]), "torus2_strip_cover")


def sheared_torus_cover() -> AffineComplex:
    """The four-square torus cover with two charts re-coordinatized by unimodular maps."""
    C = torus_square_cover()
    C = recoordinatize(C, 1, AffZMap(((1, 1), (0, 1)), (2, -1)))
    C = recoordinatize(C, 3, AffZMap(((0, -1), (1, 0)), (0, 3)))
    return AffineComplex(C.ambient_dim, C.charts, C.gluings, C.mode, "sheared_torus_cover")


_NAMED: Dict[str, Callable[[], AffineComplex]] = {
    "klein_bottle": klein_bottle,
    "circle_two_arcs": circle_two_arcs,
    "torus_square_cover": torus_square_cover,
    "klein_square_cover": klein_square_cover,
    "torus2_strip_cover": torus2_strip_cover,
    "sheared_torus_cover": sheared_torus_cover,
}

OVERLAP_EXAMPLES = ("circle_two_arcs", "torus_square_cover", "klein_square_cover",
                    "torus2_strip_cover", "sheared_torus_cover")


def list_builtins() -> List[str]:
    return ["torus:<l1,...,ln>", "single_polytope:<v1;v2;...>"] + sorted(_NAMED)


def builtin(name: str, **params) -> AffineComplex:
    """Construct a named complex. ``torus`` takes ``lengths``; ``single_polytope`` takes ``polytope``."""
    if name == "torus":
        if "lengths" not in params:
            raise ValueError("torus needs lengths")
        lengths = list(params["lengths"])
        if "n" in params and int(params["n"]) != len(lengths):
            raise ValueError("torus dimension does not match the number of edge lengths")
        return torus(lengths)
    if name == "single_polytope":
        return single_polytope(params["polytope"])
    if name not in _NAMED:
        raise UnknownBuiltinError(f"unknown builtin {name!r}; known: {', '.join(list_builtins())}")
    if params:
        raise ValueError(f"builtin {name} takes no parameters")
    return _NAMED[name]()


def parse_builtin(spec: str) -> AffineComplex:
    """Parse ``torus:2,1``, ``single_polytope:0,0;1,0;0,1`` or a bare name."""
    name, _, arg = spec.partition(":")
    name = name.strip()
    if name == "torus":
        try:
            lengths = [int(x) for x in arg.split(",") if x.strip()]
        except ValueError:
            raise ValueError(f"bad torus edge lengths {arg!r}") from None
        return torus(lengths)
    if name == "single_polytope":
        pts = [[parse_rational(c) for c in p.split(",")] for p in arg.split(";") if p.strip()]
        return single_polytope(from_points(pts))
    if arg:
        raise ValueError(f"builtin {name} takes no parameters")
    return builtin(name)

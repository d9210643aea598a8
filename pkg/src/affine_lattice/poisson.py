"""Floating-point demonstration that lattice sums of a smooth bump approach m^n times its integral.

For ``f`` smooth with compact support, ``S(m) = sum over x in (1/m) Z^n of f(x)``
differs from ``m^n * integral(f)`` by a remainder that decays faster than any
power of ``m``. This module tabulates that remainder for a concrete bump family.
Nothing here is exact; tolerances are reported alongside the numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class BumpFunction:
    """``amplitude * exp(-1 / (1 - |(x - center) / radius|^2))`` on the open ball, 0 outside."""

    center: Tuple[float, ...] = (0.0,)
    radius: float = 1.0
    amplitude: float = 1.0

    def __post_init__(self):
        center = tuple(float(c) for c in self.center)
        if not center:
            raise ValueError("center must have at least one coordinate")
        if not all(math.isfinite(c) for c in center):
            raise ValueError("center must be finite")
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise ValueError(f"radius must be positive, got {self.radius}")
        if not (self.amplitude >= 0 and math.isfinite(self.amplitude)):
            raise ValueError(f"amplitude must be non-negative, got {self.amplitude}")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", float(self.radius))
        object.__setattr__(self, "amplitude", float(self.amplitude))

    @classmethod
    def standard(cls, dimension: int = 1) -> "BumpFunction":
        return cls((0.0,) * dimension, 1.0, 1.0)

    @property
    def dimension(self) -> int:
        return len(self.center)

    def __call__(self, x) -> np.ndarray:
        """Vectorized evaluation; ``x`` has shape ``(..., n)``."""
        x = np.asarray(x, dtype=float)
        u = (x - np.asarray(self.center)) / self.radius
        s = np.sum(u * u, axis=-1)
        inside = s < 1.0
        safe = np.where(inside, 1.0 - s, 1.0)
        return np.where(inside, self.amplitude * np.exp(-1.0 / safe), 0.0)

    def support_box(self) -> List[Tuple[float, float]]:
        return [(c - self.radius, c + self.radius) for c in self.center]


def bump_eval(f: BumpFunction, x: Sequence[float]) -> float:
    if len(x) != f.dimension:
        raise ValueError(f"point has {len(x)} coordinates, bump lives in R^{f.dimension}")
    return float(f(np.asarray(x, dtype=float)))


def _grid(axes: List[np.ndarray]) -> np.ndarray:
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack(mesh, axis=-1)


def lattice_sum(f: BumpFunction, m: int) -> float:
    """Sum of f over the points of (1/m) Z^n in its support box (compensated summation)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    axes = []
    for lo, hi in f.support_box():
        k = np.arange(math.ceil(lo * m), math.floor(hi * m) + 1)
        if k.size == 0:
            return 0.0
        axes.append(k / m)
    return math.fsum(f(_grid(axes)).ravel())


def _composite_gauss(lo: float, hi: float, panels: int, order: int):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(lo, hi, panels + 1)
    half = (edges[1:] - edges[:-1]) / 2
    mid = (edges[1:] + edges[:-1]) / 2
    x = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * weights[None, :]).ravel()
    return x, w


def _tensor_quadrature(f: BumpFunction, panels: int, order: int) -> float:
    axes, weights = [], []
    for lo, hi in f.support_box():
        x, w = _composite_gauss(lo, hi, panels, order)
        axes.append(x)
        weights.append(w)
    if len(axes) == 1:
        return float(f(axes[0][:, None]) @ weights[0])
    # one slab per node of the first axis keeps memory at the size of an (n-1)-grid
    rest = _grid(axes[1:])
    slab_sums = []
    for x0, w0 in zip(axes[0], weights[0]):
        pts = np.concatenate([np.full(rest.shape[:-1] + (1,), x0), rest], axis=-1)
        values = f(pts)
        for w in reversed(weights[1:]):
            values = values @ w
        slab_sums.append(w0 * float(values))
    return math.fsum(slab_sums)


def reference_integral(
    f: BumpFunction, rtol: float = 1e-9, order: int = 32, max_nodes: int = 20_000_000
) -> Tuple[float, float]:
    """Integral of f by composite Gauss-Legendre on a tensor grid over the support box.

    The panel count doubles until two successive resolutions agree to
    ``rtol * max(1, value)``. Returns (value, error estimate).
    """
    n = f.dimension
    if n > 3:
        raise ValueError("reference_integral supports n <= 3")
    if f.amplitude == 0:
        return 0.0, 0.0
    panels = 1
    coarse = _tensor_quadrature(f, panels, order)
    while True:
        panels *= 2
        if (panels * order) ** n > max_nodes:
            raise QuadratureError(f"quadrature did not converge within {max_nodes} nodes")
        fine = _tensor_quadrature(f, panels, order)
        estimate = abs(fine - coarse)
        if estimate < rtol * max(1.0, abs(fine)):
            return fine, estimate
        coarse = fine


@dataclass(frozen=True)
class DecayRow:
    m: int
    lattice_sum: float
    scaled_integral: float
    error: float


@dataclass
class DecayReport:
    dimension: int
    integral: float
    integral_error: float
    rows: List[DecayRow]
    halving: List[Tuple[int, int, bool]] = field(default_factory=list)

    def budget(self, m: int) -> float:
        """Uncertainty of e(m) inherited from the quadrature estimate."""
        return m**self.dimension * self.integral_error

    @property
    def strictly_decreasing(self) -> Optional[bool]:
        if len(self.rows) < 2:
            return None
        errs = [abs(r.error) for r in self.rows]
        return all(b < a for a, b in zip(errs, errs[1:]))

    @property
    def tail_nonincreasing(self) -> Optional[bool]:
        """|e(m)| non-increasing from the second tabulated m on, up to the quadrature budget."""
        tail = self.rows[1:]
        if len(tail) < 2:
            return None
        return all(
            abs(b.error) <= abs(a.error) + self.budget(b.m) + self.budget(a.m)
            for a, b in zip(tail, tail[1:])
        )

    @property
    def verdict(self) -> Optional[str]:
        if len(self.rows) < 2:
            return None
        ok = self.tail_nonincreasing in (True, None) and all(h[2] for h in self.halving)
        return "consistent" if ok else "inconsistent"

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "integral": self.integral,
            "integral_error": self.integral_error,
            "rows": [
                {"m": r.m, "S": r.lattice_sum, "mnI": r.scaled_integral, "e": r.error}
                for r in self.rows
            ],
            "strictly_decreasing": self.strictly_decreasing,
            "tail_nonincreasing": self.tail_nonincreasing,
            "halving": [{"m": a, "2m": b, "ok": ok} for a, b, ok in self.halving],
            "verdict": self.verdict,
        }

    def render_text(self) -> str:
        lines = [
            f"n = {self.dimension}, integral = {self.integral:.15g} (quadrature error estimate {self.integral_error:.2e})",
            f"{'m':>6}  {'S(m)':>22}  {'m^n I':>22}  {'e(m) = S - m^n I':>22}",
        ]
        for r in self.rows:
            lines.append(
                f"{r.m:>6}  {r.lattice_sum:>22.15g}  {r.scaled_integral:>22.15g}  {r.error:>22.6e}"
            )
        for a, b, ok in self.halving:
            lines.append(f"|e({b})| <= |e({a})| / 2^{self.dimension}: {'yes' if ok else 'no'}")
        if self.verdict is not None:
            lines.append(f"decay: {self.verdict} with super-polynomial decay (observed, not proved)")
        return "\n".join(lines)

    def plot_data(self) -> str:
        return "".join(f"{r.m} {abs(r.error):.17g}\n" for r in self.rows)


def decay_report(f: BumpFunction, m_values: Sequence[int], rtol: float = 1e-9) -> DecayReport:
    m_values = [int(m) for m in m_values]
    if not m_values or any(m < 1 for m in m_values):
        raise ValueError("m_values must be a nonempty list of positive integers")
    if any(b <= a for a, b in zip(m_values, m_values[1:])):
        raise ValueError("m_values must be strictly ascending")
    integral, err = reference_integral(f, rtol)
    n = f.dimension
    rows = []
    for m in m_values:
        s = lattice_sum(f, m)
        scaled = m**n * integral
        rows.append(DecayRow(m, s, scaled, s - scaled))
    report = DecayReport(n, integral, err, rows)
    by_m = {r.m: r for r in rows}
    for m in m_values:
        if 2 * m in by_m:
            e1, e2 = abs(by_m[m].error), abs(by_m[2 * m].error)
            slack = report.budget(2 * m) + report.budget(m) / 2**n
            report.halving.append((m, 2 * m, e2 <= e1 / 2**n + slack))
    return report


# ---------------------------------------------------------------------------
# the lattice shells used to bound the Fourier-side remainder


def annulus_count(m: int, r: int, n: int) -> int:
    """#{y in m Z^n : r <= |y| < r + 1}."""
    reach = (r + 1) // m
    total = 0
    for k in np.ndindex(*([2 * reach + 1] * n)):
        sq = m * m * sum((c - reach) ** 2 for c in k)
        if r * r <= sq < (r + 1) ** 2:
            total += 1
    return total


def annulus_bound_holds(m: int, r: int, n: int) -> bool:
    """Check #A_r^m <= (2r+1)^n <= (3r)^n for integers r >= m >= 1."""
    if not (r >= m >= 1):
        raise ValueError("the shell bound is stated for integers r >= m >= 1")
    c = annulus_count(m, r, n)
    return c <= (2 * r + 1) ** n <= (3 * r) ** n

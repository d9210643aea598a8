"""Independent reference implementations used only by the tests.

Nothing here imports the package's geometry: hulls and membership are redone
from scratch with sympy's exact matrices, and lattice counts come from a plain
scan of the integer bounding box.
"""

import itertools
import math
import random
from fractions import Fraction

import numpy as np
import sympy


def _directions(points):
    base = points[0]
    return [[p[i] - base[i] for i in range(len(base))] for p in points[1:]]


class BruteHull:
    """H-description of conv(points), found by trying every candidate facet."""

    def __init__(self, points):
        pts = [tuple(Fraction(c) for c in p) for p in points]
        self.points = sorted(set(pts))
        self.n = len(self.points[0])
        dirs = _directions(self.points)
        if dirs:
            D = sympy.Matrix(dirs)
            self.span_basis = [list(v) for v in D.rowspace()]
            self.orthogonal = [list(v) for v in D.nullspace()]
        else:
            self.span_basis = []
            self.orthogonal = [list(r) for r in sympy.eye(self.n).tolist()]
        self.dim = len(self.span_basis)
        self.halfspaces = self._facets()

    def _facets(self):
        d = self.dim
        if d == 0:
            return []
        B = sympy.Matrix(self.span_basis)
        found = set()
        for subset in itertools.combinations(self.points, d):
            F = _directions(list(subset))
            if F:
                ns = (sympy.Matrix(F) * B.T).nullspace()
                if len(ns) != 1:
                    continue
                normal = list(B.T * ns[0])
            else:
                normal = list(B.T[:, 0])
            offset = sum(a * b for a, b in zip(normal, subset[0]))
            values = [sum(a * b for a, b in zip(normal, p)) for p in self.points]
            if all(v <= offset for v in values):
                found.add(self._key(normal, offset))
            elif all(v >= offset for v in values):
                found.add(self._key([-a for a in normal], -offset))
        return sorted(found)

    @staticmethod
    def _key(normal, offset):
        scale = math.lcm(*[sympy.Rational(a).q for a in normal], sympy.Rational(offset).q)
        ints = [int(a * scale) for a in normal]
        g = math.gcd(*ints)
        return tuple(i // g for i in ints), Fraction(int(offset * scale), g)

    def contains(self, x):
        x = [Fraction(c) for c in x]
        base = self.points[0]
        for w in self.orthogonal:
            if sum(sympy.Rational(a) * (xi - bi) for a, xi, bi in zip(w, x, base)) != 0:
                return False
        return all(sum(a * xi for a, xi in zip(normal, x)) <= off for normal, off in self.halfspaces)

    def integer_rows(self):
        """(a, c, is_equality) with a integer and the constraint a.x <= c or a.x == c."""
        rows = []
        base = self.points[0]
        for w in self.orthogonal:
            scale = math.lcm(*[sympy.Rational(a).q for a in w])
            ints = [int(sympy.Rational(a) * scale) for a in w]
            rows.append((ints, sum(a * b for a, b in zip(ints, base)), True))
        for normal, off in self.halfspaces:
            rows.append((list(normal), off, False))
        return rows

    def box_count(self, m):
        """Vectorized box scan: all of the integer box around m * bbox, tested against every row."""
        axes = []
        for i in range(self.n):
            lo = min(p[i] for p in self.points) * m
            hi = max(p[i] for p in self.points) * m
            axes.append(np.arange(math.ceil(lo), math.floor(hi) + 1, dtype=np.int64))
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, self.n)
        keep = np.ones(len(grid), dtype=bool)
        for a, c, eq in self.rows_cache:
            # a.(y/m) <= c  <=>  den * a.y <= m * num
            c = Fraction(c)
            lhs = grid @ (np.asarray(a, dtype=np.int64) * c.denominator)
            keep &= (lhs == m * c.numerator) if eq else (lhs <= m * c.numerator)
        return int(keep.sum())

    @property
    def rows_cache(self):
        if not hasattr(self, "_rows"):
            self._rows = self.integer_rows()
        return self._rows

    def vertices(self):
        """Points not in the hull of the others."""
        out = []
        for p in self.points:
            rest = [q for q in self.points if q != p]
            if not rest or not BruteHull(rest).contains(p):
                out.append(p)
        return out


def box_scan(points, m, member):
    """#{y in Z^n : y/m in P}, scanning the integer box around m * bbox(points)."""
    n = len(points[0])
    ranges = []
    for i in range(n):
        lo = min(Fraction(p[i]) for p in points) * m
        hi = max(Fraction(p[i]) for p in points) * m
        ranges.append(range(math.ceil(lo), math.floor(hi) + 1))
    return sum(1 for y in itertools.product(*ranges) if member([Fraction(c, m) for c in y]))


def random_rational(rng, lo=-3, hi=3, max_den=4):
    q = rng.randint(1, max_den)
    return Fraction(rng.randint(lo * q, hi * q), q)


def random_points(rng, n, k=None, max_den=4):
    k = k if k is not None else rng.randint(1, n + 3)
    return [[random_rational(rng, max_den=max_den) for _ in range(n)] for _ in range(k)]


def random_polytope_points(seed, count=50, max_dim=3):
    """The deterministic corpus of random rational polytopes shared by several tests."""
    rng = random.Random(seed)
    return [random_points(rng, rng.randint(1, max_dim)) for _ in range(count)]


def random_unimodular(rng, n, steps=6):
    """Product of random elementary integer row operations and sign flips."""
    A = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        if n > 1 and rng.random() < 0.7:
            i, j = rng.sample(range(n), 2)
            c = rng.choice([-2, -1, 1, 2])
            A[i] = [a + c * b for a, b in zip(A[i], A[j])]
        else:
            i = rng.randrange(n)
            A[i] = [-a for a in A[i]]
    if n > 1 and rng.random() < 0.5:
        rng.shuffle(A)
    return A

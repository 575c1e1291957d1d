"""Symmetric convex bodies, quadratic forms, and planar polygon tools.

Bodies are immutable and carry their own dimension. Membership and gauge
evaluations are exact rational computations; volumes come back as expression
trees that fold to exact rationals whenever no pi or square root is involved.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .errors import (
    DegenerateError,
    DimensionError,
    DomainError,
    NonConvexError,
    UnboundedError,
)
from .exact import PI, Rat, Real, as_real, frac, frac_to_str, sqrt, str_to_frac
from . import exact
from .linalg import Mat, det, inverse, is_positive_definite, mat, mat_vec, quad_value

Point = tuple[Fraction, ...]


def _point(x: Sequence[Rat]) -> Point:
    return tuple(frac(c) for c in x)


class Membership(enum.Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class QuadraticForm:
    """Positive definite symmetric rational matrix, as x^T G x."""

    gram: tuple[tuple[Fraction, ...], ...]

    def __init__(self, gram_rows: Sequence[Sequence[Rat]]):
        g = mat(gram_rows)
        n = len(g)
        if n < 1 or any(len(row) != n for row in g):
            raise DimensionError("gram matrix must be square")
        for i in range(n):
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise DomainError("gram matrix must be symmetric")
        if not is_positive_definite(g):
            raise DomainError("gram matrix must be positive definite")
        object.__setattr__(self, "gram", tuple(tuple(row) for row in g))

    @property
    def dim(self) -> int:
        return len(self.gram)

    def matrix(self) -> Mat:
        return [list(row) for row in self.gram]

    def value(self, x: Sequence[Rat]) -> Fraction:
        if len(x) != self.dim:
            raise DimensionError("point dimension mismatch")
        return quad_value(self.matrix(), x)

    def det(self) -> Fraction:
        return det(self.matrix())

    def to_json(self) -> dict:
        return {"gram": [[frac_to_str(v) for v in row] for row in self.gram]}

    @staticmethod
    def from_json(d: dict) -> "QuadraticForm":
        return QuadraticForm([[str_to_frac(v) for v in row] for row in d["gram"]])


class ConvexBody:
    """Base for origin-symmetric convex bodies with exact rational data."""

    dim: int

    def membership(self, x: Sequence[Rat]) -> Membership:
        raise NotImplementedError

    def gauge_sq(self, x: Sequence[Rat]) -> Fraction:
        """Square of the gauge inf{t > 0 : x in t*C}; exact rational."""
        raise NotImplementedError

    def volume(self) -> Real:
        raise NotImplementedError

    def volume_sq_monomial(self) -> tuple[Fraction, int]:
        """volume^2 written exactly as c * pi^e."""
        raise NotImplementedError

    def scale(self, lam: Rat) -> "ConvexBody":
        raise NotImplementedError

    def circumradius_sq_bound(self) -> Fraction:
        """A rational R2 with C contained in the ball |x|^2 <= R2."""
        raise NotImplementedError

    def bounded(self) -> bool:
        return True

    def to_json(self) -> dict:
        raise NotImplementedError

    # shared membership logic from the gauge
    def _classify_gauge(self, g2: Fraction) -> Membership:
        if g2 < 1:
            return Membership.INSIDE
        if g2 == 1:
            return Membership.BOUNDARY
        return Membership.OUTSIDE


def _check_dim(body: ConvexBody, x: Sequence[Rat]) -> Point:
    p = _point(x)
    if len(p) != body.dim:
        raise DimensionError("point dimension mismatch")
    return p


class AxisBox(ConvexBody):
    """|x_i| <= h_i per axis."""

    def __init__(self, halfwidths: Sequence[Rat]):
        hs = [frac(h) for h in halfwidths]
        if not hs:
            raise DimensionError("need at least one axis")
        if any(h <= 0 for h in hs):
            raise DomainError("halfwidths must be positive")
        self.halfwidths = tuple(hs)
        self.dim = len(hs)

    def membership(self, x):
        return self._classify_gauge(self.gauge_sq(x))

    def gauge_sq(self, x):
        p = _check_dim(self, x)
        g = max(abs(c) / h for c, h in zip(p, self.halfwidths))
        return g * g

    def volume(self) -> Real:
        v = Fraction(2) ** self.dim
        for h in self.halfwidths:
            v *= h
        return as_real(v)

    def volume_sq_monomial(self):
        return self.volume().exact() ** 2, 0

    def scale(self, lam):
        lam = frac(lam)
        if lam <= 0:
            raise DomainError("scale factor must be positive")
        return AxisBox([lam * h for h in self.halfwidths])

    def circumradius_sq_bound(self):
        return sum(h * h for h in self.halfwidths)

    def to_json(self):
        return {"type": "axisbox", "halfwidths": [frac_to_str(h) for h in self.halfwidths]}

    def __repr__(self):
        return f"AxisBox({list(self.halfwidths)})"


class FormsBox(ConvexBody):
    """|Y_j(x)| <= lam_j for the rows Y_j of a square matrix A.

    A singular A is permitted but the region is unbounded; volume and
    enumeration-facing queries then raise "unbounded".
    """

    def __init__(self, a: Sequence[Sequence[Rat]], lams: Sequence[Rat]):
        self.a = mat(a)
        n = len(self.a)
        if n == 0 or any(len(row) != n for row in self.a):
            raise DimensionError("matrix must be square")
        ls = [frac(v) for v in lams]
        if len(ls) != n:
            raise DimensionError("one bound per row required")
        if any(v <= 0 for v in ls):
            raise DomainError("bounds must be positive")
        self.lams = tuple(ls)
        self.dim = n
        self._det = det(self.a)

    def bounded(self):
        return self._det != 0

    def membership(self, x):
        p = _check_dim(self, x)
        rows = mat_vec(self.a, p)
        worst = max(abs(y) / l for y, l in zip(rows, self.lams))
        if worst < 1:
            return Membership.INSIDE
        if worst == 1:
            return Membership.BOUNDARY
        return Membership.OUTSIDE

    def gauge_sq(self, x):
        p = _check_dim(self, x)
        rows = mat_vec(self.a, p)
        g = max(abs(y) / l for y, l in zip(rows, self.lams))
        return g * g

    def volume(self) -> Real:
        if self._det == 0:
            raise UnboundedError("singular form matrix encloses infinite volume")
        v = Fraction(2) ** self.dim
        for l in self.lams:
            v *= l
        return as_real(v / abs(self._det))

    def volume_sq_monomial(self):
        return self.volume().exact() ** 2, 0

    def scale(self, lam):
        lam = frac(lam)
        if lam <= 0:
            raise DomainError("scale factor must be positive")
        return FormsBox(self.a, [lam * l for l in self.lams])

    def circumradius_sq_bound(self):
        if self._det == 0:
            raise UnboundedError("unbounded body has no circumradius")
        # x = A^{-1} y with |y_j| <= lam_j; Cauchy-Schwarz row by row
        inv = inverse(self.a)
        return sum(
            (sum(abs(inv[i][j]) * self.lams[j] for j in range(self.dim))) ** 2
            for i in range(self.dim)
        )

    def to_json(self):
        return {
            "type": "formsbox",
            "matrix": [[frac_to_str(v) for v in row] for row in self.a],
            "bounds": [frac_to_str(v) for v in self.lams],
        }

    def __repr__(self):
        return f"FormsBox({self.a}, {list(self.lams)})"


class Ellipsoid(ConvexBody):
    """Q(x) <= level for a positive definite form Q."""

    def __init__(self, form: QuadraticForm, level: Rat = 1):
        self.form = form
        self.level = frac(level)
        if self.level <= 0:
            raise DomainError("level must be positive")
        self.dim = form.dim

    def membership(self, x):
        return self._classify_gauge(self.gauge_sq(x))

    def gauge_sq(self, x):
        p = _check_dim(self, x)
        return self.form.value(p) / self.level

    def volume(self) -> Real:
        c, e = self.volume_sq_monomial()
        # e is even: pull pi^(e/2) out and fold the rational square root
        return PI ** (e // 2) * sqrt(as_real(c))

    def volume_sq_monomial(self):
        n = self.dim
        cg, eg = exact.gamma_half_squared(n + 2)  # Gamma(n/2 + 1)^2
        c = self.level**n / (cg * self.form.det())
        return c, n - eg

    def scale(self, lam):
        lam = frac(lam)
        if lam <= 0:
            raise DomainError("scale factor must be positive")
        return Ellipsoid(self.form, self.level * lam * lam)

    def circumradius_sq_bound(self):
        # Q(x) >= |x|^2 / trace(Q^{-1}) for positive definite Q
        inv = inverse(self.form.matrix())
        tr = sum(inv[i][i] for i in range(self.dim))
        return self.level * tr

    def to_json(self):
        return {
            "type": "ellipsoid",
            "gram": [[frac_to_str(v) for v in row] for row in self.form.gram],
            "level": frac_to_str(self.level),
        }

    def __repr__(self):
        return f"Ellipsoid({self.form.gram}, {self.level})"


def unit_ball(n: int) -> Ellipsoid:
    """|x|^2 <= 1 in dimension n."""
    eye = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    return Ellipsoid(QuadraticForm(eye), 1)


# ---------------------------------------------------------------------------
# planar polygon helpers


def polygon_area2(vertices: Sequence[Sequence[Rat]]) -> Fraction:
    """Twice the signed shoelace area (positive for counter-clockwise)."""
    pts = [_point(v) for v in vertices]
    if any(len(p) != 2 for p in pts):
        raise DimensionError("polygon vertices must be planar")
    s = Fraction(0)
    for (x1, y1), (x2, y2) in zip(pts, pts[1:] + pts[:1]):
        s += x1 * y2 - x2 * y1
    return s


def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Sequence[Sequence[Rat]]) -> list[Point]:
    """Strict convex hull, counter-clockwise, lexicographically smallest start."""
    pts = sorted(set(_point(p) for p in points))
    if len(pts) <= 2:
        return pts
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def canonical_convex(vertices: Sequence[Sequence[Rat]]) -> list[Point]:
    """Validate a strictly convex polygon; return it CCW from the smallest vertex."""
    pts = [_point(v) for v in vertices]
    if len(pts) < 3:
        raise NonConvexError("polygon needs at least three vertices")
    if len(set(pts)) != len(pts):
        raise NonConvexError("repeated vertex")
    area2 = polygon_area2(pts)
    if area2 == 0:
        raise NonConvexError("degenerate polygon with zero area")
    if area2 < 0:
        pts = pts[::-1]
    n = len(pts)
    for i in range(n):
        if _cross(pts[i], pts[(i + 1) % n], pts[(i + 2) % n]) <= 0:
            raise NonConvexError("polygon is not strictly convex")
    start = min(range(n), key=lambda i: pts[i])
    return pts[start:] + pts[:start]


def point_in_convex(vertices: Sequence[Point], x: Sequence[Rat]) -> Membership:
    """Exact membership of x in a strictly convex CCW polygon."""
    p = _point(x)
    n = len(vertices)
    on_edge = False
    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        c = _cross(a, b, p)
        if c < 0:
            return Membership.OUTSIDE
        if c == 0:
            on_edge = True
    return Membership.BOUNDARY if on_edge else Membership.INSIDE


class SymPolytope(ConvexBody):
    """Origin-symmetric strictly convex polygon (dimension 2 only)."""

    def __init__(self, vertices: Sequence[Sequence[Rat]]):
        pts = canonical_convex(vertices)
        vset = set(pts)
        if any((-v[0], -v[1]) not in vset for v in pts):
            raise DomainError("vertex set must be closed under negation")
        if point_in_convex(pts, (Fraction(0), Fraction(0))) is not Membership.INSIDE:
            raise DomainError("origin must be interior")
        self.vertices = pts
        self.dim = 2
        # edge representation n . x <= s with s > 0
        self._edges: list[tuple[Point, Fraction]] = []
        m = len(pts)
        for i in range(m):
            (x1, y1), (x2, y2) = pts[i], pts[(i + 1) % m]
            nx, ny = y2 - y1, x1 - x2  # outward normal for CCW order
            s = nx * x1 + ny * y1
            self._edges.append(((nx, ny), s))

    def membership(self, x):
        p = _check_dim(self, x)
        return point_in_convex(self.vertices, p)

    def gauge_sq(self, x):
        p = _check_dim(self, x)
        g = max((n[0] * p[0] + n[1] * p[1]) / s for n, s in self._edges)
        g = max(g, Fraction(0))
        return g * g

    def volume(self) -> Real:
        return as_real(abs(polygon_area2(self.vertices)) / 2)

    def volume_sq_monomial(self):
        return self.volume().exact() ** 2, 0

    def scale(self, lam):
        lam = frac(lam)
        if lam <= 0:
            raise DomainError("scale factor must be positive")
        return SymPolytope([(lam * x, lam * y) for x, y in self.vertices])

    def circumradius_sq_bound(self):
        return max(x * x + y * y for x, y in self.vertices)

    def to_json(self):
        return {
            "type": "polytope",
            "vertices": [[frac_to_str(x), frac_to_str(y)] for x, y in self.vertices],
        }

    def __repr__(self):
        return f"SymPolytope({self.vertices})"


def _on_segment(a: Point, b: Point, p: Point) -> bool:
    if _cross(a, b, p) != 0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(
        a[1], b[1]
    )


def _segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool:
    d1 = _cross(c, d, a)
    d2 = _cross(c, d, b)
    d3 = _cross(a, b, c)
    d4 = _cross(a, b, d)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 != d2 and d3 != d4:
        return True
    if d1 == 0 and _on_segment(c, d, a):
        return True
    if d2 == 0 and _on_segment(c, d, b):
        return True
    if d3 == 0 and _on_segment(a, b, c):
        return True
    if d4 == 0 and _on_segment(a, b, d):
        return True
    return False


class LatticePolygon:
    """Simple polygon with integer vertices, stored counter-clockwise."""

    def __init__(self, vertices: Sequence[Sequence[int]]):
        pts: list[Point] = []
        for v in vertices:
            p = _point(v)
            if any(c.denominator != 1 for c in p) or len(p) != 2:
                raise DomainError("vertices must be planar integer points")
            pts.append(p)
        if len(pts) < 3:
            raise DegenerateError("polygon needs at least three vertices")
        n = len(pts)
        for i in range(n):
            if pts[i] == pts[(i + 1) % n]:
                raise DegenerateError("repeated consecutive vertex")
        a2 = polygon_area2(pts)
        if a2 == 0:
            raise DegenerateError("polygon area is zero")
        if a2 < 0:
            pts = pts[::-1]
        # simplicity: non-adjacent edges must not meet at all; adjacent edges
        # share exactly their common endpoint
        edges = [(pts[i], pts[(i + 1) % n]) for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                adjacent = j == i + 1 or (i == 0 and j == n - 1)
                if adjacent:
                    shared = edges[i][1] if j == i + 1 else edges[i][0]
                    a, b = edges[i]
                    c, d = edges[j]
                    others = [p for p in (a, b) if p != shared]
                    if any(_on_segment(c, d, p) for p in others):
                        raise DegenerateError("polygon backtracks along an edge")
                    others = [p for p in (c, d) if p != shared]
                    if any(_on_segment(a, b, p) for p in others):
                        raise DegenerateError("polygon backtracks along an edge")
                elif _segments_intersect(*edges[i], *edges[j]):
                    raise DegenerateError("polygon edges intersect")
        self.vertices = pts

    def area2(self) -> Fraction:
        return polygon_area2(self.vertices)

    def area(self) -> Fraction:
        return self.area2() / 2

    def boundary_count(self) -> int:
        """Lattice points on the boundary, via gcd along each edge."""
        n = len(self.vertices)
        total = 0
        for i in range(n):
            (x1, y1), (x2, y2) = self.vertices[i], self.vertices[(i + 1) % n]
            total += math.gcd(abs(int(x2 - x1)), abs(int(y2 - y1)))
        return total

    def is_convex(self) -> bool:
        n = len(self.vertices)
        return all(
            _cross(self.vertices[i], self.vertices[(i + 1) % n], self.vertices[(i + 2) % n])
            >= 0
            for i in range(n)
        )

    def classify(self, x: Sequence[Rat]) -> Membership:
        """Exact membership for a simple polygon by ray casting."""
        p = _point(x)
        n = len(self.vertices)
        for i in range(n):
            if _on_segment(self.vertices[i], self.vertices[(i + 1) % n], p):
                return Membership.BOUNDARY
        # count crossings of the upward vertical ray from p
        inside = False
        for i in range(n):
            (x1, y1), (x2, y2) = self.vertices[i], self.vertices[(i + 1) % n]
            if (x1 > p[0]) != (x2 > p[0]):
                # y-coordinate of the edge at vertical line through p
                t = (p[0] - x1) / (x2 - x1)
                y = y1 + t * (y2 - y1)
                if y > p[1]:
                    inside = not inside
        return Membership.INSIDE if inside else Membership.OUTSIDE

    def to_json(self) -> dict:
        return {
            "type": "lattice-polygon",
            "vertices": [[int(x), int(y)] for x, y in self.vertices],
        }

    def __repr__(self):
        return f"LatticePolygon({[(int(x), int(y)) for x, y in self.vertices]})"


def body_from_json(d: dict) -> ConvexBody:
    t = d.get("type")
    if t == "axisbox":
        return AxisBox([str_to_frac(v) for v in d["halfwidths"]])
    if t == "formsbox":
        return FormsBox(
            [[str_to_frac(v) for v in row] for row in d["matrix"]],
            [str_to_frac(v) for v in d["bounds"]],
        )
    if t == "ellipsoid":
        return Ellipsoid(
            QuadraticForm([[str_to_frac(v) for v in row] for row in d["gram"]]),
            str_to_frac(d["level"]),
        )
    if t == "polytope":
        return SymPolytope([(str_to_frac(x), str_to_frac(y)) for x, y in d["vertices"]])
    raise DomainError(f"unknown body type {t!r}")


def membership(c: ConvexBody, x: Sequence[Rat]) -> Membership:
    return c.membership(x)


def volume(c: ConvexBody) -> Real:
    return c.volume()


def scale(c: ConvexBody, lam: Rat) -> ConvexBody:
    return c.scale(lam)


# ---------------------------------------------------------------------------
# Minkowski sums and the planar Brunn-Minkowski inequality


def minkowski_sum_2d(
    p: Sequence[Sequence[Rat]], q: Sequence[Sequence[Rat]]
) -> list[Point]:
    """Vertices of P + Q for strictly convex CCW polygons, by edge merge."""
    pv = canonical_convex(p)
    qv = canonical_convex(q)
    np_, nq = len(pv), len(qv)
    out: list[Point] = []
    i = j = 0
    cur = (pv[0][0] + qv[0][0], pv[0][1] + qv[0][1])
    while i < np_ or j < nq:
        out.append(cur)
        ep = (
            pv[(i + 1) % np_][0] - pv[i % np_][0],
            pv[(i + 1) % np_][1] - pv[i % np_][1],
        )
        eq = (
            qv[(j + 1) % nq][0] - qv[j % nq][0],
            qv[(j + 1) % nq][1] - qv[j % nq][1],
        )
        if i >= np_:
            step = eq
            j += 1
        elif j >= nq:
            step = ep
            i += 1
        else:
            c = ep[0] * eq[1] - ep[1] * eq[0]
            if c > 0:
                step = ep
                i += 1
            elif c < 0:
                step = eq
                j += 1
            else:
                step = (ep[0] + eq[0], ep[1] + eq[1])
                i += 1
                j += 1
        cur = (cur[0] + step[0], cur[1] + step[1])
    return canonical_convex(out)


class BrunnMinkowskiResult(NamedTuple):
    lhs: Real
    rhs: Real
    holds: bool
    equality: bool


def brunn_minkowski_check_2d(
    p: Sequence[Sequence[Rat]], q: Sequence[Sequence[Rat]], lam: Rat
) -> BrunnMinkowskiResult:
    """Check area(lam P + (1-lam) Q)^(1/2) >= lam area(P)^(1/2) + (1-lam) area(Q)^(1/2).

    The comparison is done on squared values so the decision is fully
    rational: with T = S - lam^2 a - mu^2 b and the cross term
    2 lam mu sqrt(ab), the inequality holds iff T >= 0 and T^2 >= 4 lam^2
    mu^2 a b.
    """
    lam = frac(lam)
    if not 0 <= lam <= 1:
        raise DomainError("lambda must lie in [0, 1]")
    mu = 1 - lam
    pv = canonical_convex(p)
    qv = canonical_convex(q)
    a = abs(polygon_area2(pv)) / 2
    b = abs(polygon_area2(qv)) / 2
    if lam == 0:
        mixed = qv
    elif lam == 1:
        mixed = pv
    else:
        mixed = minkowski_sum_2d(
            [(lam * x, lam * y) for x, y in pv],
            [(mu * x, mu * y) for x, y in qv],
        )
    s = abs(polygon_area2(mixed)) / 2
    lhs = sqrt(as_real(s))
    rhs = lam * sqrt(as_real(a)) + mu * sqrt(as_real(b))
    t = s - lam * lam * a - mu * mu * b
    cross_sq = 4 * lam * lam * mu * mu * a * b
    holds = t >= 0 and t * t >= cross_sq
    equality = t >= 0 and t * t == cross_sq
    return BrunnMinkowskiResult(lhs, rhs, holds, equality)

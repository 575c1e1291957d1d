"""Counting lattice points: circles and balls, divisor sums, Pick, orchards.

The counting operations return exact integers.  Scans compare those counts
against analytic main terms; the main terms come back as certified
enclosures, and the reported error columns are empirical observations, not
theorems.  The orchard decision at the end is fully exact: interval
endpoints are quadratic surds and every comparison is resolved in rational
arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np

from .body import LatticePolygon
from .errors import BudgetError, DegenerateError, DomainError, PrecisionError
from .exact import (
    PI,
    Comparison,
    Enclosure,
    Real,
    as_real,
    certified_compare,
    euler_gamma,
    frac,
    frac_to_str,
    gamma_half_squared,
    ln,
    rational_power,
    sqrt,
)
from .intmath import sqrt_frac_bounds, sqrt_frac_floor
from .theorems import TheoremCertificate

Rat = Union[int, Fraction]

# cost cap for the r_k convolution tables, in element operations
_TABLE_BUDGET = 4 * 10**9


# ---------------------------------------------------------------------------
# scan reports


@dataclass(frozen=True)
class ErrorScanReport:
    """Exact counts against a main term over a grid of x values.

    error is count minus the midpoint of the main-term enclosure and
    normalized divides that by x**theta; both are empirical columns.
    max_abs_error is the rigorous outer bound over the grid, taking the
    worse endpoint of each enclosure.
    """

    theta: Fraction
    xs: tuple
    counts: tuple
    mains: tuple
    errors: tuple
    normalized: tuple
    max_abs_error: Fraction

    def rows(self):
        return zip(self.xs, self.counts, self.mains, self.errors, self.normalized)

    def to_json(self) -> dict:
        return {
            "theta": frac_to_str(self.theta),
            "max_abs_error": frac_to_str(self.max_abs_error),
            "rows": [
                {
                    "x": x,
                    "exact": c,
                    "main": [frac_to_str(m.lo), frac_to_str(m.hi)],
                    "error": frac_to_str(e),
                    "normalized": frac_to_str(s),
                }
                for x, c, m, e, s in self.rows()
            ],
        }


def _scan_report(xs, counts, mains, theta: Fraction) -> ErrorScanReport:
    errors = []
    normalized = []
    worst = Fraction(0)
    for x, c, m in zip(xs, counts, mains):
        err = c - m.midpoint
        power = rational_power(x, theta)
        pexact = power.exact()
        scale = pexact if pexact is not None else power.enclose(Fraction(1, 10**30)).midpoint
        errors.append(err)
        normalized.append(err / scale)
        worst = max(worst, abs(c - m.lo), abs(c - m.hi))
    return ErrorScanReport(
        theta, tuple(xs), tuple(counts), tuple(mains), tuple(errors), tuple(normalized), worst
    )


def _geometric_grid(x_max: int, steps: int) -> list[int]:
    """Roughly geometric integer grid ending exactly at x_max."""
    if x_max < 1:
        raise DomainError("grid endpoint must be at least 1")
    if steps < 1:
        raise DomainError("need at least one grid step")
    xs = {1, x_max}
    for i in range(1, steps):
        xs.add(max(1, int(round(x_max ** (i / steps)))))
    return sorted(xs)


# ---------------------------------------------------------------------------
# sums of squares


def _square_indicator(n: int) -> np.ndarray:
    row = np.zeros(n + 1, dtype=np.int64)
    row[0] = 1
    a = 1
    while a * a <= n:
        row[a * a] = 2
        a += 1
    return row


def _rk_table(n: int, k: int, budget: int = _TABLE_BUDGET) -> np.ndarray:
    """r_k(0..n) by repeated convolution with the signed-square indicator."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    if k < 1:
        raise DomainError("need at least one square")
    root = math.isqrt(n)
    if max(k - 1, 1) * (n + 1) * (root + 1) > budget:
        raise BudgetError("representation table too large")
    row = _square_indicator(n)
    for _ in range(k - 1):
        nxt = np.zeros(n + 1, dtype=np.int64)
        for a in range(root + 1):
            seg = n + 1 - a * a
            nxt[a * a :] += row[:seg]
            if a:
                nxt[a * a :] += row[:seg]
        row = nxt
    return row


def r_k(n: int, k: int, budget: int = _TABLE_BUDGET) -> int:
    """Representations of n as an ordered sum of k squares of integers."""
    return int(_rk_table(n, k, budget)[n])


def circle_count(x: Rat) -> int:
    """Number of integer pairs (a, b) with a^2 + b^2 <= x."""
    x = frac(x)
    if x < 0:
        raise DomainError("radius squared must be nonnegative")
    if x.denominator == 1:
        xi = x.numerator
        amax = math.isqrt(xi)
        return sum(2 * math.isqrt(xi - a * a) + 1 for a in range(-amax, amax + 1))
    amax = int(sqrt_frac_floor(x))
    return sum(2 * int(sqrt_frac_floor(x - a * a)) + 1 for a in range(-amax, amax + 1))


def gauss_circle_bounds_check(x: Rat) -> TheoremCertificate:
    """Certify pi (sqrt x - sqrt(1/2))^2 < R(x) < pi (sqrt x + sqrt(1/2))^2.

    The inner disc fits inside the union of unit squares centred at counted
    points and that union fits inside the outer disc, so both inequalities
    are strict for x > 1/2.
    """
    x = frac(x)
    if x <= Fraction(1, 2):
        raise DomainError("bounds need x > 1/2")
    count = circle_count(x)
    half = sqrt(Fraction(1, 2))
    rx = sqrt(x)
    lower = PI * (rx - half) * (rx - half)
    upper = PI * (rx + half) * (rx + half)
    c_lo = certified_compare(lower, count)
    c_hi = certified_compare(as_real(count), upper)
    if c_lo is not Comparison.LESS or c_hi is not Comparison.LESS:
        raise PrecisionError("disc bounds could not be certified")
    tol = Fraction(1, 10**12)
    lo_enc = lower.enclose(tol)
    hi_enc = upper.enclose(tol)
    return TheoremCertificate(
        statement=f"the disc areas of radii sqrt(x) -+ sqrt(1/2) bracket the lattice count at x = {frac_to_str(x)}",
        hypotheses=[("x > 1/2", "exact")],
        checks=[
            ("pi (sqrt x - sqrt(1/2))^2 < count", "less"),
            ("count < pi (sqrt x + sqrt(1/2))^2", "less"),
        ],
        data={
            "x": frac_to_str(x),
            "count": count,
            "lower": [frac_to_str(lo_enc.lo), frac_to_str(lo_enc.hi)],
            "upper": [frac_to_str(hi_enc.lo), frac_to_str(hi_enc.hi)],
        },
    )


def _ball_volume_real(d: int) -> Real:
    """Volume of the unit d-ball, pi^(d/2) / Gamma(d/2 + 1), as a Real."""
    cg, eg = gamma_half_squared(d + 2)
    return rational_power(PI ** (d - eg) / cg, Fraction(1, 2))


def ball_volume_limit_scan(
    d: int,
    x_max: int,
    steps: int = 12,
    tol: Rat = Fraction(1, 10**30),
    budget: int = _TABLE_BUDGET,
) -> ErrorScanReport:
    """Points of Z^d with |v|^2 <= x against kappa_d x^(d/2) on a grid.

    The normalized column is the ratio residual x^(-d/2) count - kappa_d,
    which tends to zero as x grows.
    """
    if not 2 <= d <= 5:
        raise DomainError("dimension must be between 2 and 5")
    table = _rk_table(x_max, d, budget)
    cumulative = np.cumsum(table)
    xs = _geometric_grid(x_max, steps)
    kappa = _ball_volume_real(d)
    counts = [int(cumulative[x]) for x in xs]
    mains = [(kappa * rational_power(x, Fraction(d, 2))).enclose(tol) for x in xs]
    return _scan_report(xs, counts, mains, Fraction(d, 2))


# ---------------------------------------------------------------------------
# divisor counts


def divisor(n: int) -> int:
    """Number of positive divisors, by trial-division factorization."""
    if n < 1:
        raise DomainError("divisor count needs n >= 1")
    total = 1
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            total *= e + 1
        p += 1 if p == 2 else 2
    if m > 1:
        total *= 2
    return total


def divisor_summatory(x: int) -> int:
    """D(x) = sum of d(n) for n <= x, by the hyperbola identity."""
    if x < 1:
        raise DomainError("summatory range must reach 1")
    root = math.isqrt(x)
    return 2 * sum(x // a for a in range(1, root + 1)) - root * root


def divisor_error_scan(
    x_max: int, steps: int = 16, tol: Rat = Fraction(1, 10**30)
) -> ErrorScanReport:
    """D(x) - x ln x - (2 gamma - 1) x over a geometric grid, against sqrt x."""
    xs = _geometric_grid(x_max, steps)
    gamma = euler_gamma()
    counts = [divisor_summatory(x) for x in xs]
    mains = [(x * ln(x) + (2 * gamma - 1) * x).enclose(tol) for x in xs]
    return _scan_report(xs, counts, mains, Fraction(1, 2))


# ---------------------------------------------------------------------------
# Pick's identity and Jarnik's inequality


class PickResult(NamedTuple):
    interior: int
    boundary: int
    area: Fraction
    total: int
    identity_holds: bool
    verified: bool


class JarnikResult(NamedTuple):
    enclosed: int
    area: Fraction
    length: Enclosure
    holds: bool
    enclosed_closed: int
    holds_closed: bool


def _as_polygon(poly) -> LatticePolygon:
    return poly if isinstance(poly, LatticePolygon) else LatticePolygon(poly)


def _boundary_by_row(poly: LatticePolygon) -> dict:
    """Boundary lattice points grouped by y, walking each edge in gcd steps."""
    vs = [(int(x), int(y)) for x, y in poly.vertices]
    n = len(vs)
    rows: dict = {}
    seen = set()
    for i in range(n):
        x1, y1 = vs[i]
        x2, y2 = vs[(i + 1) % n]
        g = math.gcd(abs(x2 - x1), abs(y2 - y1))
        sx, sy = (x2 - x1) // g, (y2 - y1) // g
        for t in range(g):
            p = (x1 + t * sx, y1 + t * sy)
            if p not in seen:
                seen.add(p)
                rows.setdefault(p[1], []).append(p[0])
    return rows


def _interior_scan(poly: LatticePolygon) -> int:
    """Strictly interior lattice points, one crossing-interval row at a time."""
    vs = [(int(x), int(y)) for x, y in poly.vertices]
    n = len(vs)
    by_row = _boundary_by_row(poly)
    ymin = min(y for _, y in vs)
    ymax = max(y for _, y in vs)
    total = 0
    for y in range(ymin, ymax + 1):
        crossings = []
        for i in range(n):
            x1, y1 = vs[i]
            x2, y2 = vs[(i + 1) % n]
            if (y1 > y) != (y2 > y):
                crossings.append(Fraction(x1) + Fraction(y - y1, y2 - y1) * (x2 - x1))
        crossings.sort()
        boundary_row = by_row.get(y, ())
        for j in range(0, len(crossings), 2):
            xa, xb = crossings[j], crossings[j + 1]
            lo = math.floor(xa) + 1
            hi = math.ceil(xb) - 1
            if hi < lo:
                continue
            total += hi - lo + 1
            total -= sum(1 for px in boundary_row if lo <= px <= hi)
    return total


def pick_count(poly, verify="auto") -> PickResult:
    """Interior and boundary lattice counts with the area identity.

    verify=True (or "auto" on a small bounding box) recounts the interior
    by row scanning and reports whether the identity
    total = area + boundary/2 + 1 held; otherwise the interior is derived
    from the identity itself.
    """
    poly = _as_polygon(poly)
    area = poly.area()
    boundary = poly.boundary_count()
    derived = area - Fraction(boundary, 2) + 1
    if derived.denominator != 1 or derived < 0:
        raise DegenerateError("area and boundary parity disagree")
    xs = [int(x) for x, _ in poly.vertices]
    ys = [int(y) for _, y in poly.vertices]
    cells = (max(xs) - min(xs) + 1) * (max(ys) - min(ys) + 1)
    scan = verify is True or (verify == "auto" and cells <= 4 * 10**6)
    if scan:
        interior = _interior_scan(poly)
        holds = Fraction(interior) == derived
        return PickResult(interior, boundary, area, interior + boundary, holds, True)
    return PickResult(int(derived), boundary, area, int(derived) + boundary, True, False)


def _perimeter_real(poly: LatticePolygon) -> Real:
    vs = poly.vertices
    n = len(vs)
    total = as_real(0)
    for i in range(n):
        dx = vs[(i + 1) % n][0] - vs[i][0]
        dy = vs[(i + 1) % n][1] - vs[i][1]
        total = total + sqrt(dx * dx + dy * dy)
    return total


def _certified_less(diff: Fraction, length: Real) -> bool:
    c = certified_compare(as_real(diff), length)
    if c is Comparison.UNDECIDED:
        raise PrecisionError("count-versus-perimeter comparison did not separate")
    return c is Comparison.LESS


def jarnik_check(poly, tol: Rat = Fraction(1, 10**30)) -> JarnikResult:
    """Certify |area - #(strict interior)| < perimeter for a lattice polygon.

    The closed variant counts boundary points as enclosed and is reported
    alongside.
    """
    poly = _as_polygon(poly)
    area = poly.area()
    boundary = poly.boundary_count()
    derived = area - Fraction(boundary, 2) + 1
    if derived.denominator != 1 or derived < 0:
        raise DegenerateError("area and boundary parity disagree")
    enclosed = int(derived)
    perimeter = _perimeter_real(poly)
    holds = _certified_less(abs(area - enclosed), perimeter)
    closed = enclosed + boundary
    holds_closed = _certified_less(abs(area - closed), perimeter)
    return JarnikResult(enclosed, area, perimeter.enclose(frac(tol)), holds, closed, holds_closed)


# ---------------------------------------------------------------------------
# visibility from the origin


def visible(p: Sequence[int]) -> bool:
    """A lattice point is visible from the origin iff its entries are coprime."""
    coords = []
    for v in p:
        f = frac(v)
        if f.denominator != 1:
            raise DomainError("visibility is about integer points")
        coords.append(abs(f.numerator))
    if not coords or not any(coords):
        raise DomainError("the origin fixes no direction")
    return math.gcd(*coords) == 1


def visible_density(n: int) -> Fraction:
    """Fraction of the points of [1, n]^2 visible from the origin.

    Counts coprime pairs through a totient sieve: 2 sum phi(k) - 1 over
    k <= n covers both triangles with the diagonal point (1, 1) once.
    """
    if n < 1:
        raise DomainError("the sample square must be nonempty")
    phi = list(range(n + 1))
    for p in range(2, n + 1):
        if phi[p] == p:
            for m in range(p, n + 1, p):
                phi[m] -= phi[m] // p
    return Fraction(2 * sum(phi[1:]) - 1, n * n)


# ---------------------------------------------------------------------------
# the orchard question


class _Surd(NamedTuple):
    """The number p + q sqrt(m), all entries rational, m >= 0."""

    p: Fraction
    q: Fraction
    m: Fraction


_SURD_ZERO = _Surd(Fraction(0), Fraction(0), Fraction(0))
_SURD_ONE = _Surd(Fraction(1), Fraction(0), Fraction(0))


def _sign(a) -> int:
    return (a > 0) - (a < 0)


def _surd_sign(p, q, m) -> int:
    """Exact sign of p + q sqrt(m)."""
    if q == 0 or m == 0:
        return _sign(p)
    if p == 0:
        return _sign(q)
    if p > 0 and q > 0:
        return 1
    if p < 0 and q < 0:
        return -1
    d = _sign(p * p - q * q * m)
    return d if p > 0 else -d


def _surd_cmp(x: _Surd, y: _Surd) -> int:
    """Exact three-way comparison of two quadratic surds."""
    a = x.p - y.p
    b, mb = x.q, x.m
    c, mc = -y.q, y.m
    if b == 0 or mb == 0:
        return _surd_sign(a, c, mc)
    if c == 0 or mc == 0:
        return _surd_sign(a, b, mb)
    if mb == mc:
        return _surd_sign(a, b + c, mb)
    u = _surd_sign(a, b, mb)
    if u == 0:
        return _sign(c)
    if u > 0 and c > 0:
        return 1
    if u < 0 and c < 0:
        return -1
    # opposite signs: square the positive part against the other radical
    t = _surd_sign(a * a + b * b * mb - c * c * mc, 2 * a * b, mb)
    return t if u > 0 else -t


def _surd_bounds(s: _Surd, scale: int) -> tuple[Fraction, Fraction]:
    if s.q == 0 or s.m == 0:
        return s.p, s.p
    lo, hi = sqrt_frac_bounds(s.m, scale)
    if s.q > 0:
        return s.p + s.q * lo, s.p + s.q * hi
    return s.p + s.q * hi, s.p + s.q * lo


def _simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """The smallest-denominator fraction strictly between lo and hi."""
    floor_lo = math.floor(lo)
    candidate = floor_lo + 1
    if candidate < hi:
        return Fraction(candidate)
    if lo == floor_lo:
        den = math.floor(1 / (hi - floor_lo)) + 1
        return floor_lo + Fraction(1, den)
    return floor_lo + 1 / _simplest_between(1 / (hi - floor_lo), 1 / (lo - floor_lo))


def _rational_between(a: _Surd, b: _Surd) -> Fraction:
    """The simplest rational strictly between two surds with a < b."""
    scale = 10**3
    while True:
        _, a_hi = _surd_bounds(a, scale)
        b_lo, _ = _surd_bounds(b, scale)
        if a_hi < b_lo:
            return _simplest_between(a_hi, b_lo)
        scale *= 10**3


class _Cover(NamedTuple):
    start: _Surd
    end: _Surd


def _tree_cover(a: int, b: int, r2: Fraction) -> Optional[_Cover]:
    """Slope interval where the ray (1, t) meets the disc at (a, b), a >= 1.

    Solving (b - a t)^2 <= r2 (1 + t^2) gives the closed interval between
    the roots of (a^2 - r2) t^2 - 2ab t + (b^2 - r2); the ray points toward
    the tree throughout because the projection cannot vanish inside it.
    """
    lead = a * a - r2
    centre = Fraction(a * b) / lead
    radicand = r2 * (a * a + b * b - r2)
    return _Cover(
        _Surd(centre, Fraction(-1) / lead, radicand),
        _Surd(centre, Fraction(1) / lead, radicand),
    )


def _blocked_at(a: int, b: int, t: Fraction, r2: Fraction) -> bool:
    if a + b * t <= 0:
        return False
    return (b - a * t) ** 2 <= r2 * (1 + t * t)


class OrchardResult(NamedTuple):
    blocked: bool
    direction: Optional[tuple]
    certificate: TheoremCertificate


def orchard_visibility(R: Rat, r: Rat, budget: int = 10**6) -> OrchardResult:
    """Decide whether discs of radius r at lattice points within R + r of the
    origin block every ray from the origin.

    By the dihedral symmetry of the tree set it is enough to decide slopes
    t in [0, 1].  Each tree trunk covers a closed slope interval with
    quadratic-surd endpoints; a sweep in exact arithmetic either chains the
    intervals across [0, 1] (blocked) or finds a gap, in which case the
    simplest rational slope in the gap is re-verified against every tree.
    """
    R = frac(R)
    r = frac(r)
    if R <= 1:
        raise DomainError("orchard radius must exceed 1")
    if r <= 0:
        raise DomainError("trees need positive radius")
    if r >= Fraction(1, 2):
        raise DomainError("trees of radius 1/2 or more touch; radius must stay below 1/2")
    r2 = r * r
    reach2 = (R + r) * (R + r)
    amax = int(sqrt_frac_floor(reach2))
    if (2 * amax + 1) ** 2 > budget:
        raise BudgetError("tree enumeration exceeds budget")

    trees = -1
    for a in range(-amax, amax + 1):
        trees += 2 * int(sqrt_frac_floor(reach2 - a * a)) + 1
    covers = []
    for a in range(1, amax + 1):
        bmax = int(sqrt_frac_floor(reach2 - a * a))
        for b in range(-bmax, bmax + 1):
            cov = _tree_cover(a, b, r2)
            if _surd_cmp(cov.end, _SURD_ZERO) >= 0 and _surd_cmp(cov.start, _SURD_ONE) <= 0:
                covers.append(cov)
    covers.sort(key=cmp_to_key(lambda u, v: _surd_cmp(u.start, v.start)))

    reach = _SURD_ZERO
    chain = 0
    idx = 0
    while _surd_cmp(reach, _SURD_ONE) < 0:
        best = reach
        while idx < len(covers) and _surd_cmp(covers[idx].start, reach) <= 0:
            if _surd_cmp(covers[idx].end, best) > 0:
                best = covers[idx].end
            idx += 1
        if _surd_cmp(best, reach) > 0:
            reach = best
            chain += 1
            continue
        gap_hi = covers[idx].start if idx < len(covers) else _SURD_ONE
        if _surd_cmp(gap_hi, _SURD_ONE) > 0:
            gap_hi = _SURD_ONE
        t = _rational_between(reach, gap_hi)
        return _escape_result(R, r, t, reach2, r2, amax, trees)

    cert = TheoremCertificate(
        statement=f"every ray from the origin meets a tree (R = {frac_to_str(R)}, r = {frac_to_str(r)})",
        hypotheses=[("1 < R", "exact"), ("0 < r < 1/2", "exact")],
        checks=[
            ("tree slope intervals chain across [0, 1]", "verified"),
            ("dihedral symmetry extends the chain to all directions", "exact"),
        ],
        data={"trees": trees, "covers": len(covers), "chain": chain},
    )
    return OrchardResult(True, None, cert)


def _escape_result(R, r, t: Fraction, reach2, r2, amax, trees) -> OrchardResult:
    for a in range(-amax, amax + 1):
        bmax = int(sqrt_frac_floor(reach2 - a * a))
        for b in range(-bmax, bmax + 1):
            if (a or b) and _blocked_at(a, b, t, r2):
                raise PrecisionError("gap slope failed re-verification")
    direction = (t.denominator, t.numerator)
    cert = TheoremCertificate(
        statement=f"the ray with direction {direction} leaves the orchard (R = {frac_to_str(R)}, r = {frac_to_str(r)})",
        hypotheses=[("1 < R", "exact"), ("0 < r < 1/2", "exact")],
        witnesses=[direction],
        checks=[("the ray passes every tree at distance above r", "verified")],
        data={"slope": frac_to_str(t), "trees": trees},
    )
    return OrchardResult(False, direction, cert)

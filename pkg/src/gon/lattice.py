"""Rational lattices: determinant, reduction, enumeration, successive minima.

A lattice is given by n basis vectors with rational coordinates (2 <= n <= 8).
Forms without a rational embedding (hexagonal, fcc) travel as QuadraticForm
Gram matrices instead; enumeration works directly on the Gram data, so every
certificate stays exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .body import ConvexBody, QuadraticForm
from .errors import BudgetError, DegenerateError, DimensionError, DomainError
from .exact import Enclosure, Rat, enclose_sqrt, frac, frac_to_str, str_to_frac
from .intmath import sqrt_frac_bounds, sqrt_frac_floor
from .linalg import Mat, det, gram as gram_of, ldlt, mat, mat_vec, rank, transpose

ENUM_BUDGET = 10**7


@dataclass(frozen=True)
class LatticePoint:
    """Integer coefficients and, when a basis exists, the ambient vector."""

    coeffs: tuple[int, ...]
    ambient: Optional[tuple[Fraction, ...]]
    norm2: Fraction

    def __iter__(self):
        return iter(self.coeffs)


class Lattice:
    """Full-rank rational lattice; immutable after construction."""

    def __init__(self, vectors: Sequence[Sequence[Rat]]):
        rows = mat(vectors)
        n = len(rows)
        if not 2 <= n <= 8:
            raise DimensionError("lattice dimension must be between 2 and 8")
        if any(len(r) != n for r in rows):
            raise DimensionError("basis vectors must match the dimension")
        d = det(rows)
        if d == 0:
            raise DegenerateError("basis vectors are linearly dependent")
        self.vectors = tuple(tuple(r) for r in rows)
        self.dim = n
        self.det_abs = abs(d)
        self.gram = gram_of(rows)
        self._bmat = transpose(rows)

    def basis_matrix(self) -> Mat:
        """Matrix with the basis vectors as columns."""
        return [row[:] for row in self._bmat]

    def ambient(self, coeffs: Sequence[int]) -> tuple[Fraction, ...]:
        return tuple(mat_vec(self._bmat, [Fraction(c) for c in coeffs]))

    def point(self, coeffs: Sequence[int]) -> LatticePoint:
        c = tuple(int(v) for v in coeffs)
        amb = self.ambient(c)
        return LatticePoint(c, amb, sum(x * x for x in amb))

    def to_json(self) -> dict:
        return {"basis": [[frac_to_str(x) for x in v] for v in self.vectors]}

    @staticmethod
    def from_json(d: dict) -> "Lattice":
        return Lattice([[str_to_frac(x) for x in v] for v in d["basis"]])

    def __repr__(self):
        return f"Lattice({[list(v) for v in self.vectors]})"


def lattice_new(vectors: Sequence[Sequence[Rat]]) -> Lattice:
    return Lattice(vectors)


def reduce_2d(lat: Lattice) -> Lattice:
    """Lagrange-reduce a planar basis: |b1| <= |b2|, |<b1,b2>| <= |b1|^2 / 2."""
    if lat.dim != 2:
        raise DimensionError("reduction implemented for dimension 2")
    b1 = list(lat.vectors[0])
    b2 = list(lat.vectors[1])

    def n2(v):
        return v[0] * v[0] + v[1] * v[1]

    if n2(b1) > n2(b2):
        b1, b2 = b2, b1
    while True:
        # nearest integer to the projection coefficient
        r = math.floor(vdot(b1, b2) / n2(b1) + Fraction(1, 2))
        b2 = [b2[0] - r * b1[0], b2[1] - r * b1[1]]
        if n2(b2) < n2(b1):
            b1, b2 = b2, b1
        else:
            break
    return Lattice([b1, b2])


def vdot(u, v):
    return sum(frac(a) * frac(b) for a, b in zip(u, v))


# ---------------------------------------------------------------------------
# exact enumeration


def _floor_shifted_sqrt(c: Fraction, beta: Fraction) -> int:
    """Largest integer m with (m + c)^2 <= beta (beta >= 0)."""
    m = math.floor(Fraction(sqrt_frac_floor(beta)) - c) + 2
    while m + c > 0 and (m + c) * (m + c) > beta:
        m -= 1
    return m


def enumerate_gram(
    g: Mat, r2: Rat, budget: int = ENUM_BUDGET
) -> list[tuple[tuple[int, ...], Fraction]]:
    """All nonzero integer x with x^T g x <= r2, lexicographic by coefficients.

    Branch-and-bound on the exact LDL^T factorization; integer ranges per
    level come from directed rational square roots, and each emitted point's
    value is the exact partial-sum evaluation.
    """
    r2 = frac(r2)
    if r2 <= 0:
        raise DomainError("enumeration radius must be positive")
    n = len(g)
    L, D = ldlt(g)
    if any(d <= 0 for d in D):
        raise DomainError("gram matrix must be positive definite")
    results: list[tuple[tuple[int, ...], Fraction]] = []
    coeffs = [0] * n
    visited = 0

    def rec(i: int, rem: Fraction) -> None:
        nonlocal visited
        if i < 0:
            if any(coeffs):
                results.append((tuple(coeffs), r2 - rem))
            return
        c = sum(L[j][i] * coeffs[j] for j in range(i + 1, n))
        beta = rem / D[i]
        hi = _floor_shifted_sqrt(c, beta)
        lo = -_floor_shifted_sqrt(-c, beta)
        for m in range(lo, hi + 1):
            visited += 1
            if visited > budget:
                raise BudgetError("enumeration exceeded its candidate budget")
            coeffs[i] = m
            step = D[i] * (m + c) * (m + c)
            rec(i - 1, rem - step)
        coeffs[i] = 0

    rec(n - 1, r2)
    results.sort(key=lambda t: t[0])
    return results


def enumerate_in_ball(
    lat: Union[Lattice, QuadraticForm], r2: Rat, budget: int = ENUM_BUDGET
) -> list[LatticePoint]:
    """All nonzero lattice points with squared norm (form value) <= r2."""
    if isinstance(lat, QuadraticForm):
        g = lat.matrix()
        raw = enumerate_gram(g, r2, budget)
        return [LatticePoint(c, None, v) for c, v in raw]
    raw = enumerate_gram(lat.gram, r2, budget)
    return [LatticePoint(c, lat.ambient(c), v) for c, v in raw]


def minimal_vectors(
    lat: Union[Lattice, QuadraticForm], budget: int = ENUM_BUDGET
) -> tuple[Fraction, list[LatticePoint]]:
    """The first minimum and every vector attaining it."""
    g = lat.matrix() if isinstance(lat, QuadraticForm) else lat.gram
    bound = min(g[i][i] for i in range(len(g)))
    pts = enumerate_in_ball(lat, bound, budget)
    m = min(p.norm2 for p in pts)
    return m, [p for p in pts if p.norm2 == m]


# ---------------------------------------------------------------------------
# successive minima


def _independent_prefix(cands: list[tuple[Fraction, LatticePoint]], n: int) -> list[
    tuple[Fraction, LatticePoint]
]:
    chosen: list[tuple[Fraction, LatticePoint]] = []
    basis_rows: list[list[Fraction]] = []
    for g2, p in cands:
        row = [Fraction(c) for c in p.coeffs]
        if rank(basis_rows + [row]) == len(chosen) + 1:
            chosen.append((g2, p))
            basis_rows.append(row)
            if len(chosen) == n:
                break
    return chosen


def _short_independent_gauge_bound(lat: Lattice, c: ConvexBody, budget: int) -> Fraction:
    """A bound B with lambda_n^2 <= B, from n short independent vectors.

    Doubling the Euclidean search radius until the point set spans n
    dimensions keeps the bound far below the raw basis gauges on skewed
    bases, which keeps the main enumeration small.
    """
    bound = max(c.gauge_sq(v) for v in lat.vectors)
    r2 = min(lat.gram[i][i] for i in range(lat.dim))
    for _ in range(64):
        try:
            pts = enumerate_in_ball(lat, r2, budget)
        except BudgetError:
            return bound
        rows = [[Fraction(x) for x in p.coeffs] for p in pts]
        if rows and rank(rows) == lat.dim:
            by_norm = sorted(((p.norm2, p) for p in pts), key=lambda t: (t[0], t[1].coeffs))
            chosen = _independent_prefix(by_norm, lat.dim)
            found = max(c.gauge_sq(p.ambient) for _, p in chosen)
            return min(bound, found)
        r2 *= 2
    return bound


def _gauge_candidates(
    lat: Lattice, c: ConvexBody, budget: int
) -> tuple[list[tuple[Fraction, LatticePoint]], Fraction]:
    if c.dim != lat.dim:
        raise DimensionError("body and lattice dimensions differ")
    bound = _short_independent_gauge_bound(lat, c, budget)
    r2 = bound * c.circumradius_sq_bound()
    pts = enumerate_in_ball(lat, r2, budget)
    cands = []
    for p in pts:
        g2 = c.gauge_sq(p.ambient)
        if g2 <= bound:
            cands.append((g2, p))
    cands.sort(key=lambda t: (t[0], t[1].coeffs))
    return cands, bound


def successive_minima_sq(
    lat: Lattice, c: ConvexBody, budget: int = ENUM_BUDGET
) -> tuple[list[Fraction], list[LatticePoint]]:
    """Exact squared successive minima of the body's gauge on the lattice.

    The j-th minimum is attained (witnesses lie in the closed dilate), and
    for every supported body the squared gauge is rational, so the values
    are exact. The basis vectors bound the search region: lambda_n is at
    most the largest basis gauge.
    """
    cands, _ = _gauge_candidates(lat, c, budget)
    chosen = _independent_prefix(cands, lat.dim)
    if len(chosen) < lat.dim:  # pragma: no cover - guarded by the bound above
        raise DegenerateError("failed to find independent witnesses")
    return [g2 for g2, _ in chosen], [p for _, p in chosen]


def successive_minima(
    lat: Lattice,
    c: ConvexBody,
    tol: Rat = Fraction(1, 10**9),
    budget: int = ENUM_BUDGET,
) -> tuple[list[Enclosure], list[LatticePoint]]:
    """Successive minima as enclosures (exact whenever the gauge is rational)."""
    sq, witnesses = successive_minima_sq(lat, c, budget)
    return [enclose_sqrt(v, tol) for v in sq], witnesses


def dilation_rank(
    cands: list[tuple[Fraction, LatticePoint]], lam_sq: Fraction
) -> int:
    """Rank of the lattice points with squared gauge <= lam_sq."""
    rows = [[Fraction(x) for x in p.coeffs] for g2, p in cands if g2 <= lam_sq]
    return rank(rows) if rows else 0


def successive_minima_bisect(
    lat: Lattice,
    c: ConvexBody,
    tol: Rat = Fraction(1, 10**6),
    budget: int = ENUM_BUDGET,
) -> list[Enclosure]:
    """Independent route: bisect each dilation factor against the rank probe.

    Slower than the exact route and used to cross-check it; the probe counts
    independent lattice points in the closed dilate via exact gauge values.
    """
    tol = frac(tol)
    cands, bound = _gauge_candidates(lat, c, budget)
    out = []
    for j in range(1, lat.dim + 1):
        lo, hi = Fraction(0), bound
        # invariant: rank at hi >= j, rank at lo < j (rank at 0 is 0)
        while hi - lo > tol * tol:
            mid = (lo + hi) / 2
            if dilation_rank(cands, mid) >= j:
                hi = mid
            else:
                lo = mid
        # hi bounds lambda_j^2 from above, lo from below
        scale = max(2, int(2 / tol))
        root_lo = sqrt_frac_bounds(lo, scale)[0]
        root_hi = sqrt_frac_bounds(hi, scale)[1]
        out.append(Enclosure(root_lo, root_hi))
    return out

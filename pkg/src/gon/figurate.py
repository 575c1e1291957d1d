"""Figurate numbers: triangular and k-gonal values and decompositions.

Every nonnegative integer is a sum of at most three triangular numbers
(Gauss) and of at most k k-gonal numbers (Fermat, proved by Cauchy); the
decomposition routines find such witnesses by bounded search. Witnesses are
canonical: among all valid part multisets, sorted descending, the
lexicographically smallest tuple is returned, so results are deterministic.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field

from .errors import BudgetError, DomainError, NotFoundError

# decomposition targets above this raise "budget" before searching
SEARCH_CAP = 10**7


def triangular(n: int) -> int:
    """The n-th triangular number n(n+1)/2."""
    if n < 0:
        raise DomainError("triangular index must be >= 0")
    return n * (n + 1) // 2


def polygonal(k: int, n: int) -> int:
    """The n-th k-gonal number ((k-2)n^2 - (k-4)n)/2."""
    if k < 3:
        raise DomainError("polygonal order must be >= 3")
    if n < 0:
        raise DomainError("polygonal index must be >= 0")
    return ((k - 2) * n * n - (k - 4) * n) // 2


def triangular_index(v: int) -> int | None:
    """The n with triangular(n) = v, or None."""
    if v < 0:
        return None
    n = (math.isqrt(8 * v + 1) - 1) // 2
    return n if n * (n + 1) // 2 == v else None


def polygonal_index(k: int, v: int) -> int | None:
    """The n with polygonal(k, n) = v, or None."""
    if k < 3:
        raise DomainError("polygonal order must be >= 3")
    if v < 0:
        return None
    if v == 0:
        return 0
    # invert ((k-2)n^2 - (k-4)n)/2 = v
    a, b = k - 2, k - 4
    disc = b * b + 8 * a * v
    s = math.isqrt(disc)
    if s * s != disc:
        return None
    num = b + s
    if num % (2 * a):
        return None
    n = num // (2 * a)
    return n if n >= 0 and polygonal(k, n) == v else None


@dataclass
class FigurateWitness:
    """A decomposition of target into figurate parts.

    kind is "triangular" or "polygonal"; for polygonal witnesses k is the
    gon order. parts holds (index, value) pairs in descending value order
    with zero parts dropped.
    """

    kind: str
    target: int
    parts: list[tuple[int, int]] = field(default_factory=list)
    k: int | None = None

    def values(self) -> list[int]:
        return [v for _, v in self.parts]

    def verify(self) -> bool:
        if sum(v for _, v in self.parts) != self.target:
            return False
        if any(v <= 0 for _, v in self.parts):
            return False
        if self.kind == "triangular":
            return all(triangular(i) == v for i, v in self.parts)
        if self.kind == "polygonal" and self.k is not None:
            return all(polygonal(self.k, i) == v for i, v in self.parts)
        return False

    def to_json(self) -> dict:
        d = {
            "kind": self.kind,
            "target": self.target,
            "parts": [{"index": i, "value": v} for i, v in self.parts],
        }
        if self.k is not None:
            d["k"] = self.k
        return d


def _triangulars_upto(m: int) -> list[int]:
    out = []
    n = 1
    while True:
        t = n * (n + 1) // 2
        if t > m:
            return out
        out.append(t)
        n += 1


def eureka_decompose(m: int) -> FigurateWitness:
    """Write m as a sum of at most three triangular numbers.

    Gauss's theorem guarantees a witness exists; the search minimizes the
    largest part, then the next, so output is canonical.
    """
    if m < 0:
        raise DomainError("decomposition target must be >= 0")
    if m == 0:
        return FigurateWitness("triangular", 0)
    ts = _triangulars_upto(m)
    tset = set(ts)
    # smallest feasible largest part a, then smallest second part b
    start = bisect.bisect_left(ts, -(-m // 3))
    for a in ts[start:]:
        r = m - a
        if r == 0:
            return FigurateWitness("triangular", m, [(triangular_index(a), a)])
        lo = bisect.bisect_left(ts, -(-r // 2))
        hi = bisect.bisect_right(ts, min(a, r))
        for b in ts[lo:hi]:
            c = r - b
            if c == 0:
                return FigurateWitness(
                    "triangular",
                    m,
                    [(triangular_index(a), a), (triangular_index(b), b)],
                )
            if c in tset:
                return FigurateWitness(
                    "triangular",
                    m,
                    [
                        (triangular_index(a), a),
                        (triangular_index(b), b),
                        (triangular_index(c), c),
                    ],
                )
    raise NotFoundError("no three-triangular decomposition found")  # pragma: no cover


def _gonals_upto(k: int, m: int) -> list[int]:
    out = []
    n = 1
    while True:
        g = polygonal(k, n)
        if g > m:
            return out
        out.append(g)
        n += 1


def polygonal_decompose(k: int, m: int, cap: int = SEARCH_CAP) -> FigurateWitness:
    """Write m as a sum of at most k k-gonal numbers (Cauchy's theorem).

    Canonical witness as in eureka_decompose. Targets above cap raise
    "budget"; a genuine search failure would contradict the theorem and
    raises "not-found".
    """
    if k < 3:
        raise DomainError("polygonal order must be >= 3")
    if m < 0:
        raise DomainError("decomposition target must be >= 0")
    if m > cap:
        raise BudgetError("decomposition target exceeds search cap")
    if k == 3:
        w = eureka_decompose(m)
        return FigurateWitness("polygonal", m, w.parts, k=3)
    if m == 0:
        return FigurateWitness("polygonal", 0, k=k)
    gs = _gonals_upto(k, m)
    feas_memo: dict[tuple[int, int, int], bool] = {}

    def feasible(r: int, j: int, cap_val: int) -> bool:
        # can r be written as <= j k-gonal parts, each <= cap_val?
        if r == 0:
            return True
        if j == 0:
            return False
        hi = bisect.bisect_right(gs, min(cap_val, r))
        lo = bisect.bisect_left(gs, -(-r // j))
        key = (r, j, hi)
        known = feas_memo.get(key)
        if known is not None:
            return known
        ok = False
        for idx in range(hi - 1, lo - 1, -1):
            p = gs[idx]
            if feasible(r - p, j - 1, p):
                ok = True
                break
        feas_memo[key] = ok
        return ok

    parts: list[tuple[int, int]] = []
    r, j, cap_val = m, k, m
    while r:
        if j == 0:
            raise NotFoundError("no k-part polygonal decomposition found")
        lo = bisect.bisect_left(gs, -(-r // j))
        hi = bisect.bisect_right(gs, min(cap_val, r))
        chosen = None
        for idx in range(lo, hi):
            p = gs[idx]
            if feasible(r - p, j - 1, p):
                chosen = p
                break
        if chosen is None:
            raise NotFoundError("no k-part polygonal decomposition found")
        parts.append((polygonal_index(k, chosen), chosen))
        r -= chosen
        j -= 1
        cap_val = chosen
    return FigurateWitness("polygonal", m, parts, k=k)

"""Lattice sphere packings: density, kissing numbers, and classical bounds.

A lattice packs balls of radius half its first minimum.  Densities and the
Hermite invariant come back as certified enclosures, the planar Voronoi cell
is an exact rational polygon, and every inequality check is a certified
interval comparison or a plain rational one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import NamedTuple, Optional, Sequence, Union

from .body import AxisBox, ConvexBody, Ellipsoid, QuadraticForm, polygon_area2
from .errors import (
    DimensionError,
    DomainError,
    InadmissibleError,
    PrecisionError,
    UnsupportedError,
)
from .exact import (
    PI,
    Comparison,
    Enclosure,
    Rat,
    Real,
    as_real,
    certified_compare,
    compare_pi_monomials,
    frac,
    frac_to_str,
    gamma_half,
    gamma_half_squared,
    interval_constant,
    rational_power,
    zeta,
)
from .lattice import ENUM_BUDGET, Lattice, enumerate_in_ball, minimal_vectors, successive_minima_sq
from .linalg import det, mat
from .theorems import TheoremCertificate

DEFAULT_TOL = Fraction(1, 10**12)

LatticeLike = Union[Lattice, QuadraticForm, Sequence[Sequence[Rat]]]


def _carrier(lat: LatticeLike) -> Union[Lattice, QuadraticForm]:
    """Accept a lattice, a quadratic form, or raw Gram rows."""
    if isinstance(lat, (Lattice, QuadraticForm)):
        return lat
    return QuadraticForm(lat)


def _gram(car: Union[Lattice, QuadraticForm]) -> list[list[Fraction]]:
    return car.matrix() if isinstance(car, QuadraticForm) else mat(car.gram)


# ---------------------------------------------------------------------------
# density and kissing number


def _density_sq_monomial(m: Fraction, detg: Fraction, n: int) -> tuple[Fraction, int]:
    """density^2 as c * pi^e, from balls of radius sqrt(m)/2 on covolume sqrt(detg)."""
    cg, eg = gamma_half_squared(n + 2)  # Gamma(n/2 + 1)^2
    return (m / 4) ** n / (cg * detg), n - eg


def _density_enclosure(m: Fraction, detg: Fraction, n: int, tol: Fraction) -> Enclosure:
    c, e = _density_sq_monomial(m, detg, n)
    if compare_pi_monomials(c, e, Fraction(1), 0) is Comparison.GREATER:  # pragma: no cover
        raise PrecisionError("packing density came out above 1")
    return rational_power(as_real(c) * PI**e, Fraction(1, 2)).enclose(tol)


def packing_density(lat: LatticeLike, tol: Rat = DEFAULT_TOL, budget: int = ENUM_BUDGET) -> Enclosure:
    """Fraction of space filled by balls of radius half the first minimum.

    The square of the density is an exact rational multiple of a power of pi,
    so the enclosure narrows to any requested width and the bound density <= 1
    is certified before returning.
    """
    car = _carrier(lat)
    g = _gram(car)
    m, _ = minimal_vectors(car, budget)
    return _density_enclosure(m, det(g), len(g), frac(tol))


def kissing_number(lat: LatticeLike, budget: int = ENUM_BUDGET) -> int:
    """How many lattice vectors attain the first minimum."""
    _, vecs = minimal_vectors(_carrier(lat), budget)
    return len(vecs)


def hermite_invariant(lat: LatticeLike, tol: Rat = DEFAULT_TOL, budget: int = ENUM_BUDGET) -> Enclosure:
    """gamma(L) = min_norm2 / det(L)^(2/n), exact whenever the root is rational."""
    car = _carrier(lat)
    g = _gram(car)
    n = len(g)
    m, _ = minimal_vectors(car, budget)
    return rational_power(m**n / det(g), Fraction(1, n)).enclose(frac(tol))


@dataclass(frozen=True)
class PackingReport:
    """Summary of the sphere packing a lattice generates."""

    lattice: str
    min_norm2: Fraction
    kissing: int
    density: Enclosure
    hermite_invariant: Enclosure

    def to_json(self) -> dict:
        return {
            "lattice": self.lattice,
            "min_norm2": frac_to_str(self.min_norm2),
            "kissing": self.kissing,
            "density": [frac_to_str(self.density.lo), frac_to_str(self.density.hi)],
            "hermite_invariant": [
                frac_to_str(self.hermite_invariant.lo),
                frac_to_str(self.hermite_invariant.hi),
            ],
        }


def packing_report(
    lat: LatticeLike,
    label: Optional[str] = None,
    tol: Rat = DEFAULT_TOL,
    budget: int = ENUM_BUDGET,
) -> PackingReport:
    """Minimum, kissing number, density, and Hermite invariant in one pass."""
    car = _carrier(lat)
    g = _gram(car)
    n = len(g)
    detg = det(g)
    tol = frac(tol)
    m, vecs = minimal_vectors(car, budget)
    if label is None:
        if isinstance(car, Lattice):
            label = f"{n}d lattice, det {frac_to_str(car.det_abs)}"
        else:
            label = f"{n}d form, gram det {frac_to_str(detg)}"
    return PackingReport(
        lattice=label,
        min_norm2=m,
        kissing=len(vecs),
        density=_density_enclosure(m, detg, n, tol),
        hermite_invariant=rational_power(m**n / detg, Fraction(1, n)).enclose(tol),
    )


# ---------------------------------------------------------------------------
# bounds on the Hermite constant


class HermiteBounds(NamedTuple):
    n: int
    hermite: Enclosure
    minkowski: Enclosure
    blichfeldt: Enclosure
    known: Optional[Enclosure]
    note: Optional[str]


# gamma_n = c^(1/root) for the dimensions where the constant is settled
_KNOWN_HERMITE: dict[int, tuple[Fraction, int]] = {
    2: (Fraction(4, 3), 2),
    3: (Fraction(2), 3),
    4: (Fraction(2), 2),
    5: (Fraction(8), 5),
}

_NOTE_3 = (
    "attained value 2^(1/3), from the face-centred cubic form; an "
    "eighth-root figure 2^(1/8) also circulates for this dimension, but it "
    "lies below the attained value and is not used here"
)


def hermite_bounds(n: int, tol: Rat = DEFAULT_TOL) -> HermiteBounds:
    """Classical upper bounds for the Hermite constant in dimension n.

    hermite    (4/3)^((n-1)/2), by induction from the planar case
    minkowski  4 * Gamma(n/2 + 1)^(2/n) / pi, from the first-minimum theorem
    blichfeldt 2 * Gamma(n/2 + 2)^(2/n) / pi
    known      the exact constant, in the dimensions where it is settled
    """
    if not 2 <= n <= 8:
        raise DomainError("dimension must be between 2 and 8")
    tol = frac(tol)
    herm = rational_power(Fraction(4, 3), Fraction(n - 1, 2)).enclose(tol)
    mink = (4 * rational_power(gamma_half(n + 2), Fraction(2, n)) / PI).enclose(tol)
    blich = (2 * rational_power(gamma_half(n + 4), Fraction(2, n)) / PI).enclose(tol)
    known = None
    if n in _KNOWN_HERMITE:
        c, root = _KNOWN_HERMITE[n]
        known = rational_power(c, Fraction(1, root)).enclose(tol)
    note = _NOTE_3 if n == 3 else None
    return HermiteBounds(n, herm, mink, blich, known, note)


def gauss_delta_gamma(n: int, gamma: Union[Rat, Real, Enclosure], tol: Rat = DEFAULT_TOL) -> Enclosure:
    """Packing density from a Hermite invariant: (pi g / 4)^(n/2) / Gamma(n/2 + 1).

    A rational gamma goes through the exact pi-monomial route; a Real or an
    Enclosure is folded into the expression tree after a positivity check.
    """
    if n < 1:
        raise DomainError("dimension must be positive")
    tol = frac(tol)
    if isinstance(gamma, Enclosure):
        if gamma.lo <= 0:
            raise DomainError("gamma must be positive")
        gamma = interval_constant(gamma.lo, gamma.hi, "gamma")
    if isinstance(gamma, Real):
        ex = gamma.exact()
        if ex is None:
            if certified_compare(gamma, 0) is not Comparison.GREATER:
                raise DomainError("gamma must be certifiably positive")
            delta = rational_power(PI * gamma / 4, Fraction(n, 2)) / gamma_half(n + 2)
            return delta.enclose(tol)
        g = ex
    else:
        g = frac(gamma)
    if g <= 0:
        raise DomainError("gamma must be positive")
    cg, eg = gamma_half_squared(n + 2)
    c = g**n / (4**n * cg)
    return rational_power(as_real(c) * PI ** (n - eg), Fraction(1, 2)).enclose(tol)


def mordell_gamma_check(
    n: int, table: Optional[dict[int, tuple[Rat, int]]] = None
) -> TheoremCertificate:
    """Test gamma_n against powers of gamma_(n-1), entirely in rationals.

    Two exponents are tried: (n-1)/(n-2), under which the known constants
    sit in equality at n = 4, and the much weaker product (n-1)(n-2).  Each
    comparison is settled by raising both sides to a common integer power.
    """
    if n < 3:
        raise DomainError("the comparison needs n >= 3")
    tab = _KNOWN_HERMITE if table is None else {k: (frac(c), int(r)) for k, (c, r) in table.items()}
    if n not in tab or n - 1 not in tab:
        raise DomainError("no gamma data for this dimension pair")
    cn, rn = tab[n]
    cm, rm = tab[n - 1]
    if cn <= 0 or cm <= 0 or rn < 1 or rm < 1:
        raise DomainError("gamma data must have positive base and root")

    def split(lhs: Fraction, rhs: Fraction) -> str:
        if lhs < rhs:
            return "less"
        if lhs == rhs:
            return "equal"
        return "greater"

    # gamma_n <= gamma_(n-1)^((n-1)/(n-2)), raised to rn*rm*(n-2)
    corr_lhs = cn ** (rm * (n - 2))
    corr_rhs = cm ** (rn * (n - 1))
    corr = split(corr_lhs, corr_rhs)
    # gamma_n <= gamma_(n-1)^((n-1)(n-2)), raised to rn*rm
    lit_lhs = cn**rm
    lit_rhs = cm ** (rn * (n - 1) * (n - 2))
    lit = split(lit_lhs, lit_rhs)
    cert = TheoremCertificate(
        statement=(
            f"gamma_{n} against gamma_{n - 1} raised to ({n - 1})/({n - 2}) "
            f"and to ({n - 1})*({n - 2})"
        ),
        hypotheses=[
            (f"gamma_{n} = ({frac_to_str(cn)})^(1/{rn})", "exact"),
            (f"gamma_{n - 1} = ({frac_to_str(cm)})^(1/{rm})", "exact"),
        ],
        checks=[
            (f"gamma_{n} <= gamma_{n - 1}^(({n - 1})/({n - 2}))", corr),
            (f"gamma_{n} <= gamma_{n - 1}^(({n - 1})*({n - 2}))", lit),
        ],
        data={
            "n": n,
            "corrected": {
                "exponent": f"{n - 1}/{n - 2}",
                "common_power": rn * rm * (n - 2),
                "lhs": frac_to_str(corr_lhs),
                "rhs": frac_to_str(corr_rhs),
                "verdict": corr,
                "holds": corr != "greater",
            },
            "literal": {
                "exponent": f"({n - 1})*({n - 2})",
                "common_power": rn * rm,
                "lhs": frac_to_str(lit_lhs),
                "rhs": frac_to_str(lit_rhs),
                "verdict": lit,
                "holds": lit != "greater",
            },
        },
    )
    return cert


# ---------------------------------------------------------------------------
# planar Voronoi cell


def _ip(g: list[list[Fraction]], a: Sequence[Rat], b: Sequence[Rat]) -> Fraction:
    return (
        g[0][0] * a[0] * b[0]
        + g[0][1] * (a[0] * b[1] + a[1] * b[0])
        + g[1][1] * a[1] * b[1]
    )


def _reduced_pair(g: list[list[Fraction]]) -> tuple[tuple[int, int], tuple[int, int]]:
    """Lagrange-reduced basis of Z^2 under the Gram inner product."""
    u, v = (1, 0), (0, 1)
    nu, nv = g[0][0], g[1][1]
    if nv < nu:
        u, v, nu, nv = v, u, nv, nu
    while True:
        t = _ip(g, u, v)
        r = (2 * t + nu) // (2 * nu)  # nearest integer to t/nu
        if r:
            v = (v[0] - r * u[0], v[1] - r * u[1])
            nv = nv - 2 * r * t + r * r * nu
        if nv < nu:
            u, v, nu, nv = v, u, nv, nu
        else:
            return u, v


def _angle_cmp(p: Sequence[Fraction], q: Sequence[Fraction]) -> int:
    hp = 0 if (p[1] > 0 or (p[1] == 0 and p[0] > 0)) else 1
    hq = 0 if (q[1] > 0 or (q[1] == 0 and q[0] > 0)) else 1
    if hp != hq:
        return -1 if hp < hq else 1
    cr = p[0] * q[1] - p[1] * q[0]
    if cr == 0:
        return 0
    return -1 if cr > 0 else 1


@dataclass(frozen=True)
class VoronoiCell:
    """Closed Voronoi cell of the origin for a planar lattice.

    Vertices are exact rationals in basis coordinates, counter-clockwise;
    ambient data is filled in when the input carries a rational basis.
    """

    neighbours: tuple[tuple[int, int], ...]
    vertices_coeff: tuple[tuple[Fraction, Fraction], ...]
    vertices: Optional[tuple[tuple[Fraction, Fraction], ...]]
    area: Optional[Fraction]
    area_sq: Fraction

    def to_json(self) -> dict:
        return {
            "neighbours": [list(w) for w in self.neighbours],
            "vertices_coeff": [
                [frac_to_str(x), frac_to_str(y)] for x, y in self.vertices_coeff
            ],
            "vertices": None
            if self.vertices is None
            else [[frac_to_str(x), frac_to_str(y)] for x, y in self.vertices],
            "area": None if self.area is None else frac_to_str(self.area),
            "area_sq": frac_to_str(self.area_sq),
        }


def voronoi_cell_2d(lat: LatticeLike) -> VoronoiCell:
    """Voronoi cell of the origin: 4 or 6 facets from a reduced basis.

    The candidate facet vectors are the reduced basis, their sum, and their
    difference; each bisector gives a half-plane <x, w> <= <w, w>/2 in the
    Gram inner product, and pairwise intersections yield the vertices.  The
    cell area in basis coordinates must come out exactly 1, which certifies
    that the euclidean area equals the covolume.
    """
    car = _carrier(lat)
    g = _gram(car)
    if len(g) != 2:
        raise DimensionError("voronoi cell construction is planar only")
    u, v = _reduced_pair(g)
    half = [u, v, (u[0] + v[0], u[1] + v[1]), (u[0] - v[0], u[1] - v[1])]
    cands = half + [(-w[0], -w[1]) for w in half]
    rows = []
    for w in cands:
        a = (g[0][0] * w[0] + g[0][1] * w[1], g[0][1] * w[0] + g[1][1] * w[1])
        rows.append((a, _ip(g, w, w) / 2))
    verts: set[tuple[Fraction, Fraction]] = set()
    for i in range(len(rows)):
        (a1, c1) = rows[i]
        for j in range(i + 1, len(rows)):
            (a2, c2) = rows[j]
            d = a1[0] * a2[1] - a1[1] * a2[0]
            if d == 0:
                continue
            x = (c1 * a2[1] - c2 * a1[1]) / d
            y = (a1[0] * c2 - a2[0] * c1) / d
            if all(a[0] * x + a[1] * y <= c for a, c in rows):
                verts.add((x, y))
    order = sorted(verts, key=cmp_to_key(_angle_cmp))
    if polygon_area2(order) < 0:  # pragma: no cover - sort is already ccw
        order.reverse()
    if polygon_area2(order) != 2:  # pragma: no cover - theorem guard
        raise PrecisionError("voronoi cell area mismatch in basis coordinates")
    neigh = [
        w
        for w, (a, c) in zip(cands, rows)
        if sum(1 for x, y in order if a[0] * x + a[1] * y == c) >= 2
    ]
    neigh.sort(key=cmp_to_key(_angle_cmp))
    ambient = area = None
    if isinstance(car, Lattice):
        b1, b2 = car.vectors
        ambient = tuple(
            (x * b1[0] + y * b2[0], x * b1[1] + y * b2[1]) for x, y in order
        )
        area = abs(polygon_area2(ambient)) / 2
        if area != car.det_abs:  # pragma: no cover - theorem guard
            raise PrecisionError("voronoi cell area does not match the determinant")
    return VoronoiCell(
        neighbours=tuple(neigh),
        vertices_coeff=tuple(order),
        vertices=ambient,
        area=area,
        area_sq=det(g),
    )


# ---------------------------------------------------------------------------
# critical determinants and admissible lattices


def _critical_det_sq(c: ConvexBody) -> Optional[Fraction]:
    """Squared critical determinant for the two built-in planar bodies."""
    if isinstance(c, Ellipsoid) and c.dim == 2:
        m = c.form.matrix()
        if m[0][1] == 0 and m[0][0] == m[1][1] == c.level:
            return Fraction(3, 4)  # unit disc: sqrt(3)/2
    if isinstance(c, AxisBox) and c.dim == 2 and c.halfwidths == (1, 1):
        return Fraction(1)  # square of side 2
    return None


def critical_det_check_2d(
    c: ConvexBody, lat: Lattice, budget: int = ENUM_BUDGET
) -> TheoremCertificate:
    """Certify lambda_1 lambda_2 Delta(C) <= det(L) for a built-in body.

    Both successive minima and the stored critical determinant are exact
    rationals after squaring, so the verdict is a plain fraction comparison.
    """
    dsq = _critical_det_sq(c)
    if dsq is None:
        raise UnsupportedError("no built-in critical determinant for this body")
    mins, wits = successive_minima_sq(lat, c, budget)
    lhs = mins[0] * mins[1] * dsq
    rhs = det(mat(lat.gram))
    if lhs > rhs:  # pragma: no cover - theorem guard
        raise PrecisionError("critical determinant inequality failed")
    verdict = "equal" if lhs == rhs else "less"
    return TheoremCertificate(
        statement="lambda_1 lambda_2 Delta(C) <= det(L), squared and compared exactly",
        hypotheses=[("body has a built-in critical determinant", "exact")],
        witnesses=wits,
        checks=[
            (
                f"minima product {frac_to_str(lhs)} against det^2 {frac_to_str(rhs)}",
                verdict,
            )
        ],
        data={
            "minima_sq": [frac_to_str(m) for m in mins],
            "delta_sq": frac_to_str(dsq),
            "det_sq": frac_to_str(rhs),
            "verdict": verdict,
        },
    )


def _ball_radius_sq(s: ConvexBody) -> Optional[Fraction]:
    """Squared radius when the body is a euclidean ball, else None."""
    if not isinstance(s, Ellipsoid):
        return None
    m = s.form.matrix()
    d0 = m[0][0]
    n = s.dim
    if all(m[i][j] == (d0 if i == j else 0) for i in range(n) for j in range(n)):
        return s.level / d0
    return None


def hlawka_witness_check(
    s: ConvexBody,
    lat: LatticeLike,
    tol: Rat = DEFAULT_TOL,
    budget: int = ENUM_BUDGET,
) -> TheoremCertificate:
    """Check an admissible lattice against the bound vol(S) / (2 zeta(n)).

    Admissibility (no nonzero lattice point strictly inside S) is verified by
    exhaustive enumeration out to the circumradius; the determinant bound is
    then a certified comparison of 4 det^2 zeta(n)^2 with the exact squared
    volume.  A Gram-matrix witness is accepted when S is a euclidean ball.
    """
    car = _carrier(lat)
    n = s.dim
    tol = frac(tol)
    if car.dim != n:
        raise DimensionError("witness lattice must live in the body's space")
    if isinstance(car, QuadraticForm):
        rad_sq = _ball_radius_sq(s)
        if rad_sq is None:
            raise DomainError("a Gram-matrix witness needs a euclidean ball body")
        pts = enumerate_in_ball(car, rad_sq, budget)
        inside = [p for p in pts if p.norm2 < rad_sq]
        det_sq = car.det()
    else:
        pts = enumerate_in_ball(car, s.circumradius_sq_bound(), budget)
        inside = [p for p in pts if s.gauge_sq(p.ambient) < 1]
        det_sq = det(mat(car.gram))
    if inside:
        raise InadmissibleError(
            f"lattice is not admissible: {inside[0].coeffs} lies strictly inside the body"
        )
    vol_c, vol_e = s.volume_sq_monomial()
    zn = zeta(n)
    cmpv = certified_compare(as_real(4 * det_sq) * zn * zn, as_real(vol_c) * PI**vol_e)
    if cmpv is Comparison.UNDECIDED:
        raise PrecisionError("determinant bound comparison did not separate")
    verdict = "less" if cmpv is Comparison.LESS else "greater"
    det_enc = rational_power(det_sq, Fraction(1, 2)).enclose(tol)
    bound_real = s.volume() / (2 * zn)
    bound_enc = bound_real.enclose(tol)
    gap_enc = (bound_real - rational_power(det_sq, Fraction(1, 2))).enclose(tol)
    return TheoremCertificate(
        statement="det(L) <= vol(S) / (2 zeta(n)) for an admissible lattice",
        hypotheses=[("no nonzero lattice point lies strictly inside the body", "exact")],
        checks=[("det(L) against vol(S) / (2 zeta(n))", verdict)],
        data={
            "points_checked": len(pts),
            "det": [frac_to_str(det_enc.lo), frac_to_str(det_enc.hi)],
            "bound": [frac_to_str(bound_enc.lo), frac_to_str(bound_enc.hi)],
            "gap": [frac_to_str(gap_enc.lo), frac_to_str(gap_enc.hi)],
            "verdict": verdict,
            "within_bound": verdict == "less",
        },
    )

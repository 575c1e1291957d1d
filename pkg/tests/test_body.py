"""Convex bodies, polygons, Minkowski sums, Brunn-Minkowski."""

from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings, strategies as st

from gon.errors import (
    DegenerateError,
    DimensionError,
    DomainError,
    NonConvexError,
    UnboundedError,
)
from gon.exact import Comparison, certified_compare, enclose_pi
from gon.body import (
    AxisBox,
    Ellipsoid,
    FormsBox,
    LatticePolygon,
    Membership,
    QuadraticForm,
    SymPolytope,
    body_from_json,
    brunn_minkowski_check_2d,
    canonical_convex,
    convex_hull,
    minkowski_sum_2d,
    point_in_convex,
    polygon_area2,
    unit_ball,
)

I = Membership.INSIDE
B = Membership.BOUNDARY
O = Membership.OUTSIDE


# --------------------------------------------------------------------------
# QuadraticForm


def test_quadratic_form_validates():
    q = QuadraticForm([[1, F(1, 2)], [F(1, 2), 1]])
    assert q.det() == F(3, 4)
    assert q.value([1, -1]) == 1
    with pytest.raises(DomainError):
        QuadraticForm([[1, 2], [2, 1]])  # indefinite
    with pytest.raises(DomainError):
        QuadraticForm([[1, 1], [2, 1]])  # asymmetric
    with pytest.raises(DimensionError):
        QuadraticForm([[1, 0]])


def test_quadratic_form_json_round_trip():
    q = QuadraticForm([[2, F(1, 3)], [F(1, 3), 5]])
    assert QuadraticForm.from_json(q.to_json()).gram == q.gram


# --------------------------------------------------------------------------
# membership


def test_membership_examples():
    assert AxisBox([1, 1]).membership((0, 0)) is I
    assert unit_ball(2).membership((1, 0)) is B
    # |x + y| <= 1 and |y| <= 1 at (1, -1): first form 0, second hits the bound
    assert FormsBox([[1, 1], [0, 1]], [1, 1]).membership((1, -1)) is B
    assert AxisBox([1, 1]).membership((2, 0)) is O
    assert SymPolytope([(1, 1), (-1, 1), (-1, -1), (1, -1)]).membership((1, 0)) is B


def test_membership_dimension_mismatch():
    with pytest.raises(DimensionError):
        AxisBox([1, 1]).membership((0, 0, 0))


# --------------------------------------------------------------------------
# gauge


def test_gauge_sq_values():
    assert AxisBox([1, 1]).gauge_sq((F(1, 2), 0)) == F(1, 4)
    assert unit_ball(2).gauge_sq((1, 1)) == 2
    assert Ellipsoid(QuadraticForm([[1, 0], [0, 1]]), 4).gauge_sq((1, 1)) == F(1, 2)
    sq = SymPolytope([(1, 1), (-1, 1), (-1, -1), (1, -1)])
    assert sq.gauge_sq((2, 0)) == 4
    assert sq.gauge_sq((0, 0)) == 0
    assert FormsBox([[1, 1], [0, 1]], [1, 1]).gauge_sq((1, -1)) == 1


def test_gauge_matches_membership():
    bodies = [
        AxisBox([1, F(3, 2)]),
        unit_ball(2),
        SymPolytope([(2, 0), (0, 1), (-2, 0), (0, -1)]),
        FormsBox([[2, 1], [1, 1]], [1, 2]),
    ]
    pts = [(F(1, 2), F(1, 3)), (1, 0), (0, 1), (2, 2), (F(-1, 2), F(3, 4))]
    for c in bodies:
        for p in pts:
            g = c.gauge_sq(p)
            m = c.membership(p)
            assert (g < 1) == (m is I)
            assert (g == 1) == (m is B)


# --------------------------------------------------------------------------
# volume


def test_volume_unit_disc_is_pi():
    v = unit_ball(2).volume().enclose(F(1, 10**20))
    p = enclose_pi(F(1, 10**25))
    assert v.lo <= p.hi and p.lo <= v.hi
    assert unit_ball(2).volume_sq_monomial() == (F(1), 2)


def test_volume_unit_ball_3d():
    # 4 pi / 3: squared monomial (16/9) pi^2
    assert unit_ball(3).volume_sq_monomial() == (F(16, 9), 2)
    v = unit_ball(3).volume().enclose(F(1, 10**15))
    p = enclose_pi(F(1, 10**20))
    lo, hi = 4 * p.lo / 3, 4 * p.hi / 3
    assert v.lo <= hi and lo <= v.hi


def test_volume_axis_box_exact():
    assert AxisBox([1] * 5).volume().exact() == 32
    assert AxisBox([F(1, 2), 3]).volume().exact() == 6


def test_volume_forms_box():
    assert FormsBox([[1, 1], [0, 1]], [1, 1]).volume().exact() == 4
    assert FormsBox([[2, 0], [0, 1]], [1, 1]).volume().exact() == 2
    with pytest.raises(UnboundedError):
        FormsBox([[1, 1], [1, 1]], [1, 1]).volume()


def test_volume_polytope_exact():
    sq = SymPolytope([(1, 1), (-1, 1), (-1, -1), (1, -1)])
    assert sq.volume().exact() == 4


def test_ellipsoid_volume_scales_with_level_and_det():
    q = QuadraticForm([[4, 0], [0, 1]])  # axes 1/2 and 1
    c, e = Ellipsoid(q, 1).volume_sq_monomial()
    assert (c, e) == (F(1, 4), 2)  # area pi/2


# --------------------------------------------------------------------------
# scale


def test_scale_examples():
    assert AxisBox([1, 1]).scale(3).volume().exact() == 36
    e = unit_ball(2).scale(2)
    assert isinstance(e, Ellipsoid) and e.level == 4
    with pytest.raises(DomainError):
        AxisBox([1]).scale(0)


body_cases = [
    AxisBox([1, F(3, 2)]),
    unit_ball(2),
    SymPolytope([(2, 0), (1, 1), (-2, 0), (-1, -1)]),
    FormsBox([[1, 1], [0, 1]], [1, 2]),
]


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from(body_cases),
    st.fractions(min_value=F(1, 5), max_value=F(5), max_denominator=20),
    st.tuples(
        st.fractions(min_value=F(-2), max_value=F(2), max_denominator=12),
        st.fractions(min_value=F(-2), max_value=F(2), max_denominator=12),
    ),
)
def test_scale_membership_commutes(c, lam, x):
    scaled = c.scale(lam)
    assert scaled.membership((lam * x[0], lam * x[1])) is c.membership(x)


@settings(max_examples=40, deadline=None)
@given(
    st.sampled_from(body_cases),
    st.fractions(min_value=F(1, 5), max_value=F(5), max_denominator=20),
)
def test_scale_volume_law(c, lam):
    n = c.dim
    cv, ce = c.volume_sq_monomial()
    sv, se = c.scale(lam).volume_sq_monomial()
    assert se == ce and sv == cv * lam ** (2 * n)


# --------------------------------------------------------------------------
# polygon helpers


def test_polygon_area2_signs():
    sq = [(0, 0), (1, 0), (1, 1), (0, 1)]
    assert polygon_area2(sq) == 2
    assert polygon_area2(sq[::-1]) == -2


def test_canonical_convex_rejects():
    with pytest.raises(NonConvexError):
        canonical_convex([(0, 0), (1, 1)])
    with pytest.raises(NonConvexError):
        canonical_convex([(0, 0), (1, 0), (2, 0)])  # zero area
    with pytest.raises(NonConvexError):
        canonical_convex([(0, 0), (2, 0), (2, 2), (1, F(1, 2)), (0, 2)])  # dent
    with pytest.raises(NonConvexError):
        canonical_convex([(0, 0), (1, 0), (2, 1), (0, 1), (0, 0)])  # repeat


def test_canonical_convex_orients_and_rotates():
    out = canonical_convex([(1, 1), (0, 1), (0, 0), (1, 0)])  # clockwise input
    assert out[0] == (0, 0)
    assert polygon_area2(out) > 0


def test_point_in_convex():
    sq = canonical_convex([(0, 0), (2, 0), (2, 2), (0, 2)])
    assert point_in_convex(sq, (1, 1)) is I
    assert point_in_convex(sq, (2, 1)) is B
    assert point_in_convex(sq, (3, 0)) is O


def test_convex_hull_basic():
    pts = [(0, 0), (2, 0), (2, 2), (0, 2), (1, 1), (2, 1)]
    assert convex_hull(pts) == [(F(0), F(0)), (F(2), F(0)), (F(2), F(2)), (F(0), F(2))]


# --------------------------------------------------------------------------
# Minkowski sum


def test_minkowski_square_plus_square():
    sq = [(0, 0), (1, 0), (1, 1), (0, 1)]
    out = minkowski_sum_2d(sq, sq)
    assert out == canonical_convex([(0, 0), (2, 0), (2, 2), (0, 2)])


def test_minkowski_triangle_doubles():
    tri = [(0, 0), (1, 0), (0, 1)]
    out = minkowski_sum_2d(tri, tri)
    assert abs(polygon_area2(out)) == 4 * abs(polygon_area2(tri))
    assert out == canonical_convex([(0, 0), (2, 0), (0, 2)])


def test_minkowski_rejects_degenerate():
    with pytest.raises(NonConvexError):
        minkowski_sum_2d([(0, 0), (1, 0), (1, 1), (0, 1)], [(0, 0), (1, 1)])


coord = st.integers(min_value=-6, max_value=6)
point_sets = st.lists(st.tuples(coord, coord), min_size=3, max_size=10)


def _random_convex(pts):
    hull = convex_hull(pts)
    assume(len(hull) >= 3)
    return hull


@settings(max_examples=80, deadline=None)
@given(point_sets, point_sets)
def test_minkowski_matches_pairwise_hull(ps, qs):
    p = _random_convex(ps)
    q = _random_convex(qs)
    fast = minkowski_sum_2d(p, q)
    oracle = convex_hull([(a[0] + b[0], a[1] + b[1]) for a in p for b in q])
    assert fast == oracle


@settings(max_examples=60, deadline=None)
@given(point_sets, point_sets)
def test_minkowski_commutes_and_grows(ps, qs):
    p = _random_convex(ps)
    q = _random_convex(qs)
    s1 = minkowski_sum_2d(p, q)
    s2 = minkowski_sum_2d(q, p)
    assert s1 == s2
    assert len(s1) <= len(p) + len(q)
    area = abs(polygon_area2(s1))
    assert area >= max(abs(polygon_area2(p)), abs(polygon_area2(q)))


# --------------------------------------------------------------------------
# Brunn-Minkowski


def test_bm_equality_cases():
    sq = [(0, 0), (1, 0), (1, 1), (0, 1)]
    tri = [(0, 0), (2, 0), (0, 2)]
    r = brunn_minkowski_check_2d(sq, sq, F(1, 3))
    assert r.holds and r.equality
    r0 = brunn_minkowski_check_2d(sq, tri, 0)
    assert r0.holds and r0.equality
    r1 = brunn_minkowski_check_2d(sq, tri, 1)
    assert r1.holds and r1.equality


def test_bm_square_triangle_strict():
    sq = [(0, 0), (1, 0), (1, 1), (0, 1)]
    tri = [(0, 0), (2, 0), (0, 2)]
    r = brunn_minkowski_check_2d(sq, tri, F(1, 2))
    assert r.holds and not r.equality
    assert certified_compare(r.lhs, r.rhs) is Comparison.GREATER


def test_bm_homothetic_equality():
    sq = [(0, 0), (1, 0), (1, 1), (0, 1)]
    big = [(0, 0), (3, 0), (3, 3), (0, 3)]
    r = brunn_minkowski_check_2d(sq, big, F(2, 7))
    assert r.holds and r.equality


def test_bm_rejects_bad_lambda():
    sq = [(0, 0), (1, 0), (1, 1), (0, 1)]
    with pytest.raises(DomainError):
        brunn_minkowski_check_2d(sq, sq, F(3, 2))


@settings(max_examples=80, deadline=None)
@given(
    point_sets,
    point_sets,
    st.fractions(min_value=F(0), max_value=F(1), max_denominator=16),
)
def test_bm_holds_randomized(ps, qs, lam):
    p = _random_convex(ps)
    q = _random_convex(qs)
    r = brunn_minkowski_check_2d(p, q, lam)
    assert r.holds


# --------------------------------------------------------------------------
# SymPolytope validation


def test_sympolytope_requires_symmetry():
    with pytest.raises(DomainError):
        SymPolytope([(0, 0), (1, 0), (0, 1)])
    with pytest.raises(DomainError):
        SymPolytope([(2, 0), (0, 1), (-1, 0), (0, -1)])


# --------------------------------------------------------------------------
# LatticePolygon


def test_lattice_polygon_validates():
    p = LatticePolygon([(0, 0), (3, 0), (3, 2), (0, 2)])
    assert p.area() == 6
    assert p.boundary_count() == 10
    assert p.is_convex()
    with pytest.raises(DomainError):
        LatticePolygon([(0, 0), (F(1, 2), 0), (0, 1)])
    with pytest.raises(DegenerateError):
        LatticePolygon([(0, 0), (1, 0), (2, 0)])
    with pytest.raises(DegenerateError):
        LatticePolygon([(0, 0), (2, 2), (2, 0), (0, 2)])  # bowtie


def test_lattice_polygon_orients_ccw():
    p = LatticePolygon([(0, 0), (0, 2), (2, 2), (2, 0)])
    assert p.area2() == 8


def test_lattice_polygon_nonconvex_allowed():
    arrow = LatticePolygon([(0, 0), (4, 0), (4, 4), (2, 1), (0, 4)])
    assert not arrow.is_convex()
    assert arrow.classify((2, 1)) is B
    assert arrow.classify((2, 3)) is O
    assert arrow.classify((1, 1)) is I


def test_lattice_polygon_classify_square():
    p = LatticePolygon([(0, 0), (3, 0), (3, 3), (0, 3)])
    assert p.classify((1, 2)) is I
    assert p.classify((0, 1)) is B
    assert p.classify((4, 1)) is O
    assert p.classify((3, 3)) is B


# --------------------------------------------------------------------------
# JSON round trips


def test_body_json_round_trips():
    bodies = [
        AxisBox([1, F(3, 2)]),
        FormsBox([[1, 1], [0, 1]], [1, 2]),
        unit_ball(3),
        SymPolytope([(2, 0), (1, 1), (-2, 0), (-1, -1)]),
    ]
    for c in bodies:
        d = c.to_json()
        c2 = body_from_json(d)
        assert c2.to_json() == d
    with pytest.raises(DomainError):
        body_from_json({"type": "moebius"})

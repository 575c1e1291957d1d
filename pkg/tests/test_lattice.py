"""Lattice construction, reduction, enumeration, successive minima."""

import itertools
from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings, strategies as st

from gon.body import AxisBox, Ellipsoid, QuadraticForm, SymPolytope, unit_ball
from gon.errors import BudgetError, DegenerateError, DimensionError, DomainError
from gon.lattice import (
    Lattice,
    enumerate_in_ball,
    lattice_new,
    minimal_vectors,
    reduce_2d,
    successive_minima,
    successive_minima_bisect,
    successive_minima_sq,
)
from gon.intmath import sqrt_frac_floor
from gon.linalg import det, inverse, mat, mat_mul, mat_vec

HEX_GRAM = [[1, F(1, 2)], [F(1, 2), 1]]
FCC_GRAM = [[1, F(1, 2), F(1, 2)], [F(1, 2), 1, F(1, 2)], [F(1, 2), F(1, 2), 1]]


def coeff_box(rows, r2):
    """Coefficient radius guaranteed to cover every point of norm^2 <= r2.

    For x = m B with |x| <= sqrt(r2), each m_j = sum_i x_i (B^-1)[i][j]
    is bounded by sqrt(r2) times the j-th column norm of B^-1.
    """
    binv = inverse(mat(rows))
    n = len(rows)
    worst = max(sum(binv[i][j] ** 2 for i in range(n)) for j in range(n))
    return int(sqrt_frac_floor(F(r2) * worst)) + 1


def brute_points(lat, r2, box=6):
    """Coefficient-box oracle for enumeration."""
    n = lat.dim
    out = []
    for coeffs in itertools.product(range(-box, box + 1), repeat=n):
        if all(c == 0 for c in coeffs):
            continue
        amb = lat.ambient(coeffs)
        v = sum(x * x for x in amb)
        if v <= r2:
            out.append((coeffs, v))
    out.sort(key=lambda t: t[0])
    return out


def test_lattice_new_examples():
    assert lattice_new([[1, 0], [0, 1]]).det_abs == 1
    assert lattice_new([[2, 0], [1, 1]]).det_abs == 2
    with pytest.raises(DegenerateError):
        lattice_new([[1, 0], [2, 0]])
    with pytest.raises(DimensionError):
        lattice_new([[1]])
    with pytest.raises(DimensionError):
        lattice_new([[1, 0, 0], [0, 1, 0]])


def test_lattice_json_round_trip():
    lat = lattice_new([[2, 0], [1, 1]])
    assert Lattice.from_json(lat.to_json()).vectors == lat.vectors


def test_gram_and_ambient():
    lat = lattice_new([[2, 0], [1, 1]])
    assert lat.gram == mat([[4, 2], [2, 2]])
    assert lat.ambient([1, 1]) == (F(3), F(1))
    p = lat.point([1, -1])
    assert p.ambient == (F(1), F(-1)) and p.norm2 == 2


def test_reduce_2d_examples():
    r = reduce_2d(lattice_new([[1, 0], [100, 1]]))
    assert {tuple(map(abs, v)) for v in r.vectors} == {(1, 0), (0, 1)}
    r2 = reduce_2d(lattice_new([[2, 0], [1, 1]]))
    b1 = r2.vectors[0]
    assert b1[0] ** 2 + b1[1] ** 2 == 2
    assert r2.det_abs == 2


small_vec = st.tuples(
    st.integers(min_value=-5, max_value=5), st.integers(min_value=-5, max_value=5)
)


@settings(max_examples=100, deadline=None)
@given(small_vec, small_vec)
def test_reduce_2d_properties(v1, v2)	:
    d = v1[0] * v2[1] - v1[1] * v2[0]
    assume(d != 0)
    lat = lattice_new([v1, v2])
    red = reduce_2d(lat)
    assert red.det_abs == lat.det_abs
    b1, b2 = red.vectors
    n1 = b1[0] ** 2 + b1[1] ** 2
    n2 = b2[0] ** 2 + b2[1] ** 2
    assert n1 <= n2
    assert abs(b1[0] * b2[0] + b1[1] * b2[1]) * 2 <= n1
    # same lattice: rows transform by an integral unimodular matrix
    u = mat_mul([list(v) for v in red.vectors], inverse([list(v) for v in lat.vectors]))
    assert abs(det(u)) == 1
    assert all(x.denominator == 1 for row in u for x in row)
    # b1 attains the first minimum
    assert n1 == minimal_vectors(red)[0]


def test_enumerate_z2_examples():
    z2 = lattice_new([[1, 0], [0, 1]])
    pts = enumerate_in_ball(z2, 1)
    assert sorted(p.coeffs for p in pts) == [(-1, 0), (0, -1), (0, 1), (1, 0)]
    assert len(enumerate_in_ball(z2, 2)) == 8


def test_enumerate_even_sum_lattice():
    # squared-norm threshold 2 keeps the four diagonal points; (2,0) has
    # squared norm 4 and appears once the radius is widened
    lat = lattice_new([[2, 0], [1, 1]])
    pts = enumerate_in_ball(lat, 2)
    ambients = sorted(p.ambient for p in pts)
    assert ambients == sorted(
        [(F(1), F(1)), (F(-1), F(-1)), (F(1), F(-1)), (F(-1), F(1))]
    )
    wider = enumerate_in_ball(lat, 4)
    assert (F(2), F(0)) in [p.ambient for p in wider]
    assert (F(0), F(2)) in [p.ambient for p in wider]


def test_enumerate_orders_lexicographically():
    z2 = lattice_new([[1, 0], [0, 1]])
    pts = enumerate_in_ball(z2, 2)
    assert [p.coeffs for p in pts] == sorted(p.coeffs for p in pts)


def test_enumerate_budget():
    z2 = lattice_new([[1, 0], [0, 1]])
    with pytest.raises(BudgetError):
        enumerate_in_ball(z2, 10**8, budget=100)
    with pytest.raises(DomainError):
        enumerate_in_ball(z2, 0)


entry = st.integers(min_value=-3, max_value=3)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.lists(entry, min_size=2, max_size=2), min_size=2, max_size=2),
    st.integers(min_value=1, max_value=10),
)
def test_enumerate_matches_brute_force_2d(rows, r2):
    assume(det(mat(rows)) != 0)
    box = coeff_box(rows, r2)
    assume(box <= 16)
    lat = lattice_new(rows)
    fast = [(p.coeffs, p.norm2) for p in enumerate_in_ball(lat, r2)]
    assert fast == brute_points(lat, r2, box=box)


@settings(max_examples=25, deadline=None)
@given(
    st.lists(st.lists(entry, min_size=3, max_size=3), min_size=3, max_size=3),
    st.integers(min_value=1, max_value=10),
)
def test_enumerate_matches_brute_force_3d(rows, r2):
    assume(det(mat(rows)) != 0)
    box = coeff_box(rows, r2)
    assume(box <= 10)
    lat = lattice_new(rows)
    fast = [(p.coeffs, p.norm2) for p in enumerate_in_ball(lat, r2)]
    assert fast == brute_points(lat, r2, box=box)


def test_enumerate_gram_hexagonal():
    form = QuadraticForm(HEX_GRAM)
    pts = enumerate_in_ball(form, 1)
    assert len(pts) == 6
    assert all(p.norm2 == 1 for p in pts)
    assert all(p.ambient is None for p in pts)


def test_minimal_vectors_examples():
    z3 = lattice_new([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    m, vs = minimal_vectors(z3)
    assert m == 1 and len(vs) == 6
    m, vs = minimal_vectors(QuadraticForm(HEX_GRAM))
    assert m == 1 and len(vs) == 6
    m, vs = minimal_vectors(QuadraticForm(FCC_GRAM))
    assert m == 1 and len(vs) == 12


def test_minimal_vectors_skew():
    lat = lattice_new([[2, 0], [1, 1]])
    m, vs = minimal_vectors(lat)
    assert m == 2
    assert sorted(p.ambient for p in vs) == sorted(
        [(F(1), F(1)), (F(-1), F(-1)), (F(1), F(-1)), (F(-1), F(1))]
    )


def test_successive_minima_disc():
    z2 = lattice_new([[1, 0], [0, 1]])
    lams, wits = successive_minima(z2, unit_ball(2))
    assert [l.exact for l in lams] == [1, 1]
    assert {tuple(map(abs, w.coeffs)) for w in wits} == {(1, 0), (0, 1)}


def test_successive_minima_box():
    z2 = lattice_new([[1, 0], [0, 1]])
    box = AxisBox([2, F(1, 2)])
    lams, wits = successive_minima(z2, box)
    assert [l.exact for l in lams] == [F(1, 2), 2]
    sq, _ = successive_minima_sq(z2, box)
    assert sq == [F(1, 4), 4]


def test_successive_minima_skew_disc():
    lat = lattice_new([[2, 0], [1, 1]])
    sq, wits = successive_minima_sq(lat, unit_ball(2))
    assert sq[0] == 2  # lambda_1 = sqrt(2), witness (1,1)
    assert abs(wits[0].ambient[0]) == 1 and abs(wits[0].ambient[1]) == 1
    lams, _ = successive_minima(lat, unit_ball(2), tol=F(1, 10**12))
    e = lams[0]
    assert e.lo**2 <= 2 <= e.hi**2 and e.width <= F(1, 10**12)


def test_successive_minima_witnesses_independent():
    lat = lattice_new([[3, 1, 0], [1, 2, 1], [0, 1, 4]])
    sq, wits = successive_minima_sq(lat, unit_ball(3))
    assert sq == sorted(sq)
    from gon.linalg import rank

    assert rank([[F(c) for c in w.coeffs] for w in wits]) == 3


def test_successive_minima_polytope():
    z2 = lattice_new([[1, 0], [0, 1]])
    diamond = SymPolytope([(1, 0), (0, 1), (-1, 0), (0, -1)])
    sq, wits = successive_minima_sq(z2, diamond)
    assert sq == [1, 1]


def test_successive_minima_ellipsoid_level():
    z2 = lattice_new([[1, 0], [0, 1]])
    e = Ellipsoid(QuadraticForm([[1, 0], [0, 4]]), 1)
    sq, _ = successive_minima_sq(z2, e)
    assert sq == [1, 4]


def test_bisection_route_agrees():
    cases = [
        (lattice_new([[1, 0], [0, 1]]), unit_ball(2)),
        (lattice_new([[2, 0], [1, 1]]), unit_ball(2)),
        (lattice_new([[1, 0], [0, 1]]), AxisBox([2, F(1, 2)])),
        (lattice_new([[3, 1], [1, 2]]), SymPolytope([(1, 1), (-1, 1), (-1, -1), (1, -1)])),
    ]
    for lat, c in cases:
        sq, _ = successive_minima_sq(lat, c)
        brackets = successive_minima_bisect(lat, c, tol=F(1, 10**4))
        for v, e in zip(sq, brackets):
            assert e.lo**2 <= v <= e.hi**2


def test_second_theorem_bound_small_random():
    import random

    rng = random.Random(7)
    for _ in range(30):
        n = rng.choice([2, 3])
        while True:
            rows = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
            if det(mat(rows)) != 0:
                break
        lat = lattice_new(rows)
        box = AxisBox([F(rng.randint(1, 4)), F(rng.randint(1, 4))] + [F(1)] * (n - 2))
        sq, _ = successive_minima_sq(lat, box)
        prod_sq = F(1)
        for v in sq:
            prod_sq *= v
        vol = box.volume().exact()
        ratio_sq = prod_sq * vol**2 / lat.det_abs**2
        lower = (F(2**n) / math_factorial(n)) ** 2
        upper = F(2**n) ** 2
        assert lower <= ratio_sq <= upper


def math_factorial(n):
    import math

    return math.factorial(n)

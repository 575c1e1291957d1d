"""Packing tests: densities, Hermite bounds, Voronoi cells, admissibility.

Reference numbers were frozen from a float oracle (math.gamma / math.pi):
densities (m/4)^(n/2) pi^(n/2) / (Gamma(n/2+1) sqrt(det)), bounds
4 Gamma(n/2+1)^(2/n) / pi and 2 Gamma(n/2+2)^(2/n) / pi.
"""

from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from gon.body import AxisBox, QuadraticForm, SymPolytope, unit_ball
from gon.errors import (
    BudgetError,
    DimensionError,
    DomainError,
    InadmissibleError,
    UnsupportedError,
)
from gon.exact import Enclosure, rational_power
from gon.lattice import lattice_new, minimal_vectors
from gon.linalg import det, mat
from gon.packing import (
    HermiteBounds,
    PackingReport,
    critical_det_check_2d,
    gauss_delta_gamma,
    hermite_bounds,
    hermite_invariant,
    hlawka_witness_check,
    kissing_number,
    mordell_gamma_check,
    packing_density,
    packing_report,
    voronoi_cell_2d,
)

HEX = [[F(1), F(1, 2)], [F(1, 2), F(1)]]
FCC = [
    [F(1), F(1, 2), F(1, 2)],
    [F(1, 2), F(1), F(1, 2)],
    [F(1, 2), F(1, 2), F(1)],
]
D4 = [(1, 1, 0, 0), (1, -1, 0, 0), (0, 1, -1, 0), (0, 0, 1, -1)]

# frozen float oracle values
Z2_DENSITY = 0.7853981633974483  # pi/4
HEX_DENSITY = 0.9068996821171089  # pi/(2 sqrt 3)
FCC_DENSITY = 0.7404804896930609  # pi/(3 sqrt 2)
Z4_DENSITY = 0.30842513753404244  # pi^2/32
D4_DENSITY = 0.6168502750680849  # pi^2/16
MINKOWSKI = {2: 1.273239544735163, 3: 1.539338926236506, 4: 1.800632632314212,
             5: 2.058451325246398, 8: 2.818142367211747}
BLICHFELDT = {2: 1.273239544735163, 3: 1.417743272834640, 4: 1.559393602467352,
              5: 1.698782678427924, 8: 2.107052877058985}
KNOWN_GAMMA = {2: 1.154700538379251, 3: 1.259921049894873,
               4: 1.414213562373095, 5: 1.515716566510398}


def zn(n):
    return lattice_new([[1 if i == j else 0 for j in range(n)] for i in range(n)])


def pins(enc, ref, width=F(1, 10**10)):
    """The enclosure is tight and its midpoint agrees with the float reference.

    The reference carries float rounding of its own, so the match is asked
    for at 5e-14 relative rather than as strict bracketing.
    """
    mid = float(enc.midpoint)
    return abs(mid - ref) <= 5e-14 * max(1.0, abs(ref)) and enc.width <= width


def overlap(a, b):
    return max(a.lo, b.lo) <= min(a.hi, b.hi)


@st.composite
def gram_matrices(draw, n):
    rows = [[draw(st.integers(-3, 3)) for _ in range(n)] for _ in range(n)]
    assume(det(mat(rows)) != 0)
    return [
        [F(sum(rows[k][i] * rows[k][j] for k in range(n))) for j in range(n)]
        for i in range(n)
    ]


@st.composite
def bases_2d(draw):
    rows = [[draw(st.integers(-6, 6)) for _ in range(2)] for _ in range(2)]
    assume(det(mat(rows)) != 0)
    return rows


# ---------------------------------------------------------------------------
# density, kissing, reports


def test_density_z2():
    assert pins(packing_density(zn(2)), Z2_DENSITY)


def test_density_hexagonal_gram():
    enc = packing_density(HEX)
    assert pins(enc, HEX_DENSITY)
    assert F(9068, 10**4) < enc.lo and enc.hi < F(9070, 10**4)


def test_density_fcc_gram():
    enc = packing_density(QuadraticForm(FCC))
    assert pins(enc, FCC_DENSITY)
    assert F(7404, 10**4) < enc.lo and enc.hi < F(7405, 10**4)


def test_density_z4_and_d4():
    assert pins(packing_density(zn(4)), Z4_DENSITY)
    assert pins(packing_density(lattice_new(D4)), D4_DENSITY)


def test_density_budget_error():
    with pytest.raises(BudgetError):
        packing_density(FCC, budget=1)


def test_kissing_numbers():
    assert kissing_number(zn(2)) == 4
    assert kissing_number(HEX) == 6
    assert kissing_number(FCC) == 12
    assert kissing_number(zn(4)) == 8
    assert kissing_number(lattice_new(D4)) == 24


def test_minimal_vector_set_symmetric():
    m, vecs = minimal_vectors(QuadraticForm(HEX))
    assert m == 1
    coeffs = {p.coeffs for p in vecs}
    assert all((-a, -b) in coeffs for a, b in coeffs)


def test_hermite_invariant_hexagonal():
    enc = hermite_invariant(HEX)
    assert pins(enc, KNOWN_GAMMA[2])
    assert enc.lo**2 < F(4, 3) < enc.hi**2


def test_hermite_invariant_d4_attains_known():
    enc = hermite_invariant(lattice_new(D4))
    assert pins(enc, KNOWN_GAMMA[4])
    assert enc.lo**2 < 2 < enc.hi**2


def test_packing_report_fields_and_json():
    rep = packing_report(HEX, label="hexagonal")
    assert isinstance(rep, PackingReport)
    assert rep.lattice == "hexagonal"
    assert rep.min_norm2 == 1
    assert rep.kissing == 6
    assert pins(rep.density, HEX_DENSITY)
    assert pins(rep.hermite_invariant, KNOWN_GAMMA[2])
    d = rep.to_json()
    assert set(d) == {"lattice", "min_norm2", "kissing", "density", "hermite_invariant"}
    assert d["min_norm2"] == "1" and d["kissing"] == 6
    assert len(d["density"]) == 2


def test_packing_report_default_label():
    assert packing_report(zn(2)).lattice == "2d lattice, det 1"
    assert packing_report(HEX).lattice == "2d form, gram det 3/4"


@settings(max_examples=60, deadline=None)
@given(gram_matrices(2))
def test_density_below_one_2d(g):
    enc = packing_density(g)
    assert 0 < enc.lo and enc.hi < 1


@settings(max_examples=25, deadline=None)
@given(gram_matrices(3))
def test_density_below_one_3d(g):
    enc = packing_density(g)
    assert 0 < enc.lo and enc.hi < 1


@settings(max_examples=40, deadline=None)
@given(gram_matrices(2))
def test_density_matches_delta_of_invariant(g):
    dens = packing_density(g)
    delta = gauss_delta_gamma(2, hermite_invariant(g))
    assert overlap(dens, delta)


@settings(max_examples=40, deadline=None)
@given(gram_matrices(2))
def test_kissing_even(g):
    k = kissing_number(g)
    assert k >= 2 and k % 2 == 0


# ---------------------------------------------------------------------------
# hermite bounds and the delta formula


def test_hermite_bounds_n2():
    hb = hermite_bounds(2)
    assert isinstance(hb, HermiteBounds)
    assert pins(hb.hermite, KNOWN_GAMMA[2])
    assert pins(hb.minkowski, MINKOWSKI[2])
    assert pins(hb.blichfeldt, BLICHFELDT[2])
    assert hb.known is not None and overlap(hb.known, hb.hermite)
    assert hb.known.hi < hb.blichfeldt.lo
    assert hb.note is None


def test_hermite_bounds_n3_flagged_note():
    hb = hermite_bounds(3)
    assert pins(hb.known, KNOWN_GAMMA[3])
    assert "2^(1/3)" in hb.note and "2^(1/8)" in hb.note
    assert hb.known.hi < hb.blichfeldt.lo < hb.blichfeldt.hi < hb.minkowski.lo


def test_hermite_bounds_n4_known_below_all():
    hb = hermite_bounds(4)
    assert pins(hb.known, KNOWN_GAMMA[4])
    assert pins(hb.hermite, 1.539600717839002)
    assert pins(hb.minkowski, MINKOWSKI[4])
    assert pins(hb.blichfeldt, BLICHFELDT[4])
    assert hb.known.hi < hb.hermite.lo
    assert hb.known.hi < hb.minkowski.lo
    assert hb.known.hi < hb.blichfeldt.lo


def test_hermite_bounds_n5():
    hb = hermite_bounds(5)
    assert pins(hb.known, KNOWN_GAMMA[5])
    assert pins(hb.blichfeldt, BLICHFELDT[5])
    assert hb.known.hi < hb.blichfeldt.lo


def test_hermite_bounds_high_dims():
    for n in (6, 7, 8):
        hb = hermite_bounds(n)
        assert hb.known is None and hb.note is None
        assert 0 < hb.blichfeldt.lo
        assert hb.blichfeldt.hi < hb.minkowski.lo
    assert pins(hermite_bounds(8).minkowski, MINKOWSKI[8])


def test_hermite_bounds_domain():
    with pytest.raises(DomainError):
        hermite_bounds(1)
    with pytest.raises(DomainError):
        hermite_bounds(9)


def test_delta_dimension_one_is_one():
    enc = gauss_delta_gamma(1, 1)
    assert enc.lo <= 1 <= enc.hi and enc.width <= 2 * F(1, 10**12)


def test_delta_hexagonal_value():
    gamma2 = rational_power(F(4, 3), F(1, 2))
    enc = gauss_delta_gamma(2, gamma2)
    assert pins(enc, HEX_DENSITY)
    assert overlap(enc, packing_density(HEX))


def test_delta_fcc_value():
    gamma3 = rational_power(2, F(1, 3))
    enc = gauss_delta_gamma(3, gamma3)
    assert pins(enc, FCC_DENSITY)
    assert overlap(enc, packing_density(FCC))


def test_delta_accepts_enclosure_and_rational():
    enc = gauss_delta_gamma(2, hermite_invariant(HEX))
    assert float(enc.lo) - 1e-9 <= HEX_DENSITY <= float(enc.hi) + 1e-9
    rat = gauss_delta_gamma(2, F(4, 3))
    assert pins(rat, 1.0471975511965976)  # pi/3, above 1: no clamp in the formula


def test_delta_domain():
    with pytest.raises(DomainError):
        gauss_delta_gamma(0, 1)
    with pytest.raises(DomainError):
        gauss_delta_gamma(2, F(-1, 3))
    with pytest.raises(DomainError):
        gauss_delta_gamma(2, Enclosure(F(-1, 10), F(1, 10)))


# ---------------------------------------------------------------------------
# mordell exponent check


def test_mordell_n4_equality_under_corrected_exponent():
    cert = mordell_gamma_check(4)
    assert cert.ok()
    d = cert.data
    assert d["corrected"]["verdict"] == "equal"
    assert d["corrected"]["lhs"] == "64" and d["corrected"]["rhs"] == "64"
    assert d["literal"]["verdict"] == "less"
    assert d["corrected"]["holds"] and d["literal"]["holds"]


def test_mordell_n3():
    d = mordell_gamma_check(3).data
    assert d["corrected"]["verdict"] == "less"
    assert d["corrected"]["lhs"] == "4" and d["corrected"]["rhs"] == "4096/729"
    assert d["literal"]["verdict"] == "less"


def test_mordell_n5():
    d = mordell_gamma_check(5).data
    assert d["corrected"]["verdict"] == "less"
    assert d["literal"]["verdict"] == "less"


def test_mordell_custom_table_can_fail():
    cert = mordell_gamma_check(3, table={3: (F(4), 1), 2: (F(4, 3), 2)})
    assert cert.ok()  # decided, even though the inequality fails
    assert cert.data["corrected"]["verdict"] == "greater"
    assert not cert.data["corrected"]["holds"]


def test_mordell_domain():
    with pytest.raises(DomainError):
        mordell_gamma_check(2)
    with pytest.raises(DomainError):
        mordell_gamma_check(6)
    with pytest.raises(DomainError):
        mordell_gamma_check(3, table={3: (F(2), 0), 2: (F(4, 3), 2)})


# ---------------------------------------------------------------------------
# voronoi cells


def shoelace2(pts):
    s = F(0)
    for (x1, y1), (x2, y2) in zip(pts, pts[1:] + pts[:1]):
        s += x1 * y2 - x2 * y1
    return s


def test_voronoi_z2_square_cell():
    cell = voronoi_cell_2d(zn(2))
    h = F(1, 2)
    assert set(cell.vertices_coeff) == {(h, h), (-h, h), (-h, -h), (h, -h)}
    assert set(cell.vertices) == set(cell.vertices_coeff)
    assert cell.area == 1 and cell.area_sq == 1
    assert len(cell.neighbours) == 4
    assert set(cell.neighbours) == {(1, 0), (-1, 0), (0, 1), (0, -1)}


def test_voronoi_hexagonal_cell():
    cell = voronoi_cell_2d(HEX)
    t = F(1, 3)
    expected = {
        (t, t), (-t, -t),
        (2 * t, -t), (-2 * t, t),
        (t, -2 * t), (-t, 2 * t),
    }
    assert set(cell.vertices_coeff) == expected
    assert cell.vertices is None and cell.area is None
    assert cell.area_sq == F(3, 4)
    assert len(cell.neighbours) == 6
    assert abs(shoelace2(list(cell.vertices_coeff))) == 2


def test_voronoi_skew_basis_ambient_square():
    cell = voronoi_cell_2d(lattice_new([[2, 0], [1, 1]]))
    assert cell.area == 2 and cell.area_sq == 4
    assert set(cell.vertices) == {(1, 0), (0, 1), (-1, 0), (0, -1)}
    assert len(cell.neighbours) == 4


def test_voronoi_rectangular_has_four_facets():
    cell = voronoi_cell_2d(lattice_new([[1, 0], [0, 3]]))
    assert set(cell.vertices) == {
        (F(1, 2), F(3, 2)), (-F(1, 2), F(3, 2)),
        (-F(1, 2), -F(3, 2)), (F(1, 2), -F(3, 2)),
    }
    assert len(cell.neighbours) == 4 and cell.area == 3


def test_voronoi_json_round_shape():
    d = voronoi_cell_2d(HEX).to_json()
    assert d["vertices"] is None and d["area"] is None
    assert d["area_sq"] == "3/4"
    assert len(d["vertices_coeff"]) == 6 and len(d["neighbours"]) == 6


def test_voronoi_domain():
    with pytest.raises(DimensionError):
        voronoi_cell_2d(FCC)


@settings(max_examples=60, deadline=None)
@given(bases_2d())
def test_voronoi_random_properties(rows):
    lat = lattice_new(rows)
    cell = voronoi_cell_2d(lat)
    assert cell.area == lat.det_abs
    assert abs(shoelace2(list(cell.vertices_coeff))) == 2
    assert len(cell.vertices_coeff) in (4, 6)
    assert len(cell.neighbours) == len(cell.vertices_coeff)
    vset = set(cell.vertices_coeff)
    assert all((-x, -y) in vset for x, y in vset)
    nset = set(cell.neighbours)
    assert all((-a, -b) in nset for a, b in nset)


# ---------------------------------------------------------------------------
# critical determinants


def test_critical_det_disc_z2():
    cert = critical_det_check_2d(unit_ball(2), zn(2))
    assert cert.ok()
    assert cert.data["verdict"] == "less"
    assert cert.data["delta_sq"] == "3/4"
    assert cert.data["minima_sq"] == ["1", "1"]
    assert cert.data["det_sq"] == "1"


def test_critical_det_square_equality():
    cert = critical_det_check_2d(AxisBox([1, 1]), zn(2))
    assert cert.data["verdict"] == "equal"


def test_critical_det_skew_basis():
    cert = critical_det_check_2d(unit_ball(2), lattice_new([[1, 0], [7, 1]]))
    assert cert.data["minima_sq"] == ["1", "1"]
    assert cert.data["verdict"] == "less"


def test_critical_det_unsupported_bodies():
    diamond = SymPolytope([(1, 0), (0, 1), (-1, 0), (0, -1)])
    with pytest.raises(UnsupportedError):
        critical_det_check_2d(diamond, zn(2))
    with pytest.raises(UnsupportedError):
        critical_det_check_2d(unit_ball(2).scale(2), zn(2))


@settings(max_examples=40, deadline=None)
@given(bases_2d())
def test_critical_det_random_disc_sweep(rows):
    cert = critical_det_check_2d(unit_ball(2), lattice_new(rows))
    assert cert.ok()
    assert cert.data["verdict"] in ("less", "equal")


# ---------------------------------------------------------------------------
# admissible lattices against the zeta bound


def test_hlawka_disc_with_hexagonal_witness():
    cert = hlawka_witness_check(unit_ball(2), QuadraticForm(HEX))
    assert cert.ok()
    assert cert.data["within_bound"] is True
    assert cert.data["points_checked"] == 6
    det_lo, det_hi = [F(v) for v in cert.data["det"]]
    assert float(det_lo) <= 0.8660254037844386 <= float(det_hi)
    b_lo, b_hi = [F(v) for v in cert.data["bound"]]
    assert float(b_lo) <= 0.954929658551372 <= float(b_hi)
    gap_lo, _ = [F(v) for v in cert.data["gap"]]
    assert gap_lo > 0


def test_hlawka_square_witness_exceeds_bound():
    cert = hlawka_witness_check(AxisBox([1, 1]), lattice_new([[1, 1], [1, -1]]))
    assert cert.data["within_bound"] is False
    assert cert.data["verdict"] == "greater"
    lo, hi = [F(v) for v in cert.data["det"]]
    assert lo <= 2 <= hi
    b_lo, b_hi = [F(v) for v in cert.data["bound"]]
    assert float(b_lo) <= 1.2158542037080533 <= float(b_hi)


def test_hlawka_inadmissible_lattice():
    with pytest.raises(InadmissibleError):
        hlawka_witness_check(unit_ball(2).scale(F(3, 2)), zn(2))


def test_hlawka_fcc_in_unit_ball():
    cert = hlawka_witness_check(unit_ball(3), QuadraticForm(FCC))
    assert cert.data["within_bound"] is True
    assert cert.data["points_checked"] == 12


def test_hlawka_domain():
    with pytest.raises(DomainError):
        hlawka_witness_check(AxisBox([1, 1]), QuadraticForm(HEX))
    with pytest.raises(DimensionError):
        hlawka_witness_check(unit_ball(3), zn(2))


# ---------------------------------------------------------------------------
# cross-checks against the blichfeldt bound


@settings(max_examples=30, deadline=None)
@given(gram_matrices(2))
def test_invariant_below_blichfeldt_2d(g):
    inv = hermite_invariant(g)
    assert inv.hi < hermite_bounds(2).blichfeldt.lo


@settings(max_examples=15, deadline=None)
@given(gram_matrices(3))
def test_invariant_below_blichfeldt_3d(g):
    inv = hermite_invariant(g)
    assert inv.hi < hermite_bounds(3).blichfeldt.lo

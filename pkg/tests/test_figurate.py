"""Triangular and polygonal numbers, Gauss/Cauchy decompositions."""

import pytest
from hypothesis import given, settings, strategies as st

from gon.errors import BudgetError, DomainError
from gon.figurate import (
    FigurateWitness,
    eureka_decompose,
    polygonal,
    polygonal_decompose,
    polygonal_index,
    triangular,
    triangular_index,
)


def test_triangular_values():
    assert triangular(0) == 0
    assert triangular(3) == 6
    assert triangular(63) == 2016
    assert triangular(10) == 55


def test_triangular_rejects_negative():
    with pytest.raises(DomainError):
        triangular(-1)


def test_polygonal_values():
    assert polygonal(4, 5) == 25
    assert polygonal(3, 63) == 2016
    assert polygonal(5, 3) == 12
    assert polygonal(6, 4) == 28


def test_polygonal_rejects_bad_args():
    with pytest.raises(DomainError):
        polygonal(2, 5)
    with pytest.raises(DomainError):
        polygonal(5, -1)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_polygonal_3_matches_triangular(n):
    assert polygonal(3, n) == triangular(n)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_polygonal_4_is_square(n):
    assert polygonal(4, n) == n * n


def test_theon_identity():
    # consecutive triangular numbers sum to a square
    for n in range(1, 10**4 + 1):
        assert triangular(n - 1) + triangular(n) == n * n


def test_odd_sum_identity():
    total = 0
    for m in range(1, 10**4 + 1):
        total += 2 * m - 1
        assert total == m * m


def test_index_inversion():
    assert triangular_index(2016) == 63
    assert triangular_index(2017) is None
    assert polygonal_index(5, 12) == 3
    assert polygonal_index(5, 13) is None
    assert polygonal_index(4, 49) == 7


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=3, max_value=12), st.integers(min_value=0, max_value=10**4))
def test_index_round_trip(k, n):
    assert polygonal_index(k, polygonal(k, n)) == n


def test_eureka_empty_for_zero():
    w = eureka_decompose(0)
    assert w.parts == [] and w.verify()


def test_eureka_2016_canonical():
    # lexicographic minimum by descending parts: 903 + 903 + 210
    w = eureka_decompose(2016)
    assert w.values() == [903, 903, 210]
    assert w.verify()
    assert {1485, 465, 66} <= {triangular(n) for n in range(70)}  # paper's witness exists too


def test_eureka_small_cases():
    assert eureka_decompose(1).values() == [1]
    assert eureka_decompose(2).values() == [1, 1]
    assert eureka_decompose(5).values() == [3, 1, 1]
    assert eureka_decompose(10).values() == [6, 3, 1]


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_eureka_always_succeeds(m):
    w = eureka_decompose(m)
    assert len(w.parts) <= 3
    assert w.verify()
    vals = w.values()
    assert vals == sorted(vals, reverse=True)


def test_eureka_totality_small_sweep():
    for m in range(0, 3000):
        w = eureka_decompose(m)
        assert len(w.parts) <= 3 and w.verify()


def test_polygonal_decompose_examples():
    assert polygonal_decompose(4, 7).values() == [4, 1, 1, 1]
    w = polygonal_decompose(3, 2016)
    assert len(w.parts) <= 3 and w.verify() and w.k == 3
    assert polygonal_decompose(5, 0).parts == []


def test_polygonal_decompose_budget():
    with pytest.raises(BudgetError):
        polygonal_decompose(4, 10**7 + 1)


@settings(max_examples=150, deadline=None)
@given(st.integers(min_value=3, max_value=8), st.integers(min_value=0, max_value=10**4))
def test_polygonal_decompose_succeeds(k, m):
    w = polygonal_decompose(k, m)
    assert len(w.parts) <= k
    assert w.verify()
    vals = w.values()
    assert vals == sorted(vals, reverse=True)


def test_witness_json():
    w = eureka_decompose(6)  # canonical witness is 3 + 3, not the single 6
    d = w.to_json()
    assert d["kind"] == "triangular" and d["target"] == 6
    assert d["parts"] == [{"index": 2, "value": 3}, {"index": 2, "value": 3}]
    wp = polygonal_decompose(5, 12)
    assert wp.to_json()["k"] == 5


def test_witness_verify_rejects_bad():
    w = FigurateWitness("triangular", 7, [(3, 6)])
    assert not w.verify()  # sums to 6, not 7
    w2 = FigurateWitness("triangular", 6, [(2, 6)])
    assert not w2.verify()  # wrong index

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from dioph_lab import lattice as lat
from oracles import naive_shortest_grid_vector, naive_successive_minima


def test_successive_minima_standard():
    assert lat.successive_minima(lat.LatticeBasis(((1, 0), (0, 1))), "sup") == [1, 1]
    assert lat.successive_minima(lat.LatticeBasis(((1, 0, 0), (0, 1, 0), (0, 0, 1))), "sup") == [1, 1, 1]


def test_successive_minima_half_shifted():
    L = lat.LatticeBasis(((F(1), F(0)), (F(1, 2), F(1, 2))))
    assert lat.successive_minima(L, "euclidean") == [F(1, 2), F(1, 2)]  # squared


def test_shortest_grid_vector_examples():
    Z3 = lat.LatticeBasis(((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    assert lat.shortest_grid_vector(Z3, (F(1, 2), 0, 0)) == F(1, 2)
    Z2 = lat.LatticeBasis(((1, 0), (0, 1)))
    assert lat.shortest_grid_vector(Z2, (0, 0)) == 0
    D = lat.LatticeBasis(((F(2), F(0)), (F(0), F(1, 2))))
    assert lat.shortest_grid_vector(D, (1, 0)) == 1


def test_dual_shortest():
    Z2 = lat.LatticeBasis(((1, 0), (0, 1)))
    assert lat.dual_shortest(Z2).value_sq == 1
    L = lat.LatticeBasis(((F(1), F(0)), (F(1, 2), F(1, 2))))
    ds = lat.dual_shortest(L)
    assert ds.value_sq == 2
    assert tuple(abs(x) for x in ds.vector) == (1, 1)
    D = lat.LatticeBasis(((F(2), F(0)), (F(0), F(1, 2))))
    assert lat.dual_shortest(D).value_sq == F(1, 4)


def test_unimodular_completion_first_column():
    T, Ti = lat.unimodular_completion([3, 5, 7])
    # a T = e_1, so a is the first row of T^{-1}
    assert list(Ti[0]) == [3, 5, 7]
    I = lat.matmul(T, Ti)
    assert [list(r) for r in I] == [[int(i == j) for j in range(3)] for i in range(3)]


def test_hnf_generators():
    L = lat.lattice_from_generators([(F(1), F(0)), (F(0), F(1)), (F(1, 2), F(1, 2))])
    assert L.covolume_sq == F(1, 4)


def _rand_basis(rng, d):
    while True:
        B = [[F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(d)] for _ in range(d)]
        if lat.det(B) != 0:
            return B


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(0, 10**6), st.sampled_from(["sup", "euclidean"]))
def test_minima_match_naive_enumeration(d, seed, norm):
    B = _rand_basis(random.Random(seed), d)
    assert lat.successive_minima(lat.LatticeBasis(tuple(map(tuple, B))), norm) == naive_successive_minima(B, norm)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(0, 10**6), st.sampled_from(["sup", "euclidean"]))
def test_grid_vector_matches_naive_enumeration(d, seed, norm):
    rng = random.Random(seed)
    B = _rand_basis(rng, d)
    shift = [F(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(d)]
    L = lat.LatticeBasis(tuple(map(tuple, B)))
    assert lat.shortest_grid_vector(L, shift, norm) == naive_shortest_grid_vector(B, shift, norm)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 3), st.integers(0, 10**6))
def test_lll_preserves_lattice(d, seed):
    B = _rand_basis(random.Random(seed), d)
    red, _ = lat.lll_reduce(B)
    assert abs(lat.det(red)) == abs(lat.det(B))
    L = lat.LatticeBasis(tuple(map(tuple, B)))
    assert all(L.contains(v) for v in red)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 3), st.integers(0, 10**6))
def test_minkowski_second_theorem_sup(d, seed):
    # 1 / d! <= prod lambda_i / covol <= 1 in the sup norm (unit ball volume 2^d)
    B = _rand_basis(random.Random(seed), d)
    vals = lat.successive_minima(lat.LatticeBasis(tuple(map(tuple, B))), "sup")
    prod = F(1)
    for v in vals:
        prod *= v
    covol = abs(lat.det(B))
    fact = 1
    for i in range(2, d + 1):
        fact *= i
    assert F(1, fact) * covol <= prod <= covol


def test_dimension_cap():
    with pytest.raises(lat.ResourceError):
        n = 40
        lat.successive_minima(lat.LatticeBasis(tuple(tuple(int(i == j) for j in range(n)) for i in range(n))))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 10**6))
def test_rank_two_minima_vectors(seed, skew):
    # skewed bases exercise the two-dimensional reduction path
    rng = random.Random(seed)
    B = [[F(1), F(skew % 997, rng.randint(1, 50))], [F(0), F(1, rng.randint(1, 200))]]
    L = lat.LatticeBasis(tuple(map(tuple, B)))
    vals, vecs = lat.successive_minima(L, "euclidean", return_vectors=True)
    assert vals == naive_successive_minima(B, "euclidean")
    assert [sum(x * x for x in v) for v in vecs] == vals
    assert all(L.contains(v) for v in vecs) and lat.det([list(v) for v in vecs]) != 0

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from dioph_lab import transference as tr
from dioph_lab.exact import Power
from oracles import naive_inhomogeneous_exists


def test_constants():
    k = tr.transfer_constants(1, 1)
    assert (k.gamma_nec, k.gamma_suf, k.c1, k.c2) == (2, F(1, 4), F(1, 4), 16)
    k = tr.transfer_constants(1, 2)
    assert (k.gamma_nec, k.gamma_suf) == (3, F(1, 36))
    assert k.c1 == Power.of(3, F(-3, 2)) and k.c2 == 216
    k = tr.transfer_constants(2, 1)
    assert (k.gamma_suf, k.c1) == (F(1, 18), F(1, 27))


def test_necessary_direction_examples():
    r = tr.check_necessary([[0]], [F(1, 2)], F(1, 2), 2)
    assert isinstance(r, tr.AllYPass) and r.q == (0,)  # |0 - 1/2| = C already
    assert isinstance(tr.check_necessary([[0]], [F(1, 2)], F(1, 100), 50), tr.PremiseVacuous)


def test_sufficient_direction_examples():
    r = tr.check_sufficient([[0]], [0], F(1, 4), 4)
    assert isinstance(r, tr.InhomogeneousSolution) and r.q == (0,)
    r = tr.check_sufficient([[0]], [F(1, 2)], F(1, 4), 4)
    assert r == tr.HypothesisFailed((1,))


def test_domain_errors():
    with pytest.raises(tr.DomainError):
        tr.check_necessary([[0]], [0], 0, 4)
    with pytest.raises(tr.DomainError):
        tr.transfer_DU(1, 1, 2, 4)


def _rand_instance(rng, m, n):
    A = [[F(rng.randint(0, 5), rng.randint(1, 6)) for _ in range(n)] for _ in range(m)]
    b = [F(rng.randint(0, 5), rng.randint(1, 6)) for _ in range(m)]
    return A, b


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([(1, 1), (1, 2), (2, 1)]))
def test_directions_never_conflict(seed, shape):
    rng = random.Random(seed)
    A, b = _rand_instance(rng, *shape)
    C = F(1, rng.randint(2, 30))
    X = rng.randint(2, 12)
    r = tr.check_necessary(A, b, C, X)
    assert not isinstance(r, tr.HomogeneousWitnessViolated)
    # the sufficient direction raises InternalInconsistency on any conflict
    s = tr.check_sufficient(A, b, C, X)
    assert isinstance(s, (tr.HypothesisFailed, tr.InhomogeneousSolution))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([(1, 1), (1, 2), (2, 1)]))
def test_solution_search_matches_naive_box(seed, shape):
    rng = random.Random(seed)
    A, b = _rand_instance(rng, *shape)
    C = F(1, rng.randint(2, 30))
    X = rng.randint(1, 6)
    found = tr.inhomogeneous_solution(A, b, C, X, "classes")
    assert (found is not None) == naive_inhomogeneous_exists(A, b, C, X)
    assert found == tr.inhomogeneous_solution(A, b, C, X, "brute")


def test_sandwich_examples():
    sched = [2 ** k for k in range(1, 11)]
    assert tr.sandwich_check([[0]], [F(1, 2)], 1, sched, sched).ok
    rep = tr.sandwich_check([[F(1, 3), F(1, 3)]], [F(1, 2)], 1, sched[:6], sched[:6])
    assert rep.ok
    assert tr.sandwich_check([[0]], [F(1, 2)], 1, [], []).rows == []


def test_transfer_DU():
    assert tr.transfer_DU(1, 1, F(1, 3), 7) == (F(1, 3), 7)
    assert tr.transfer_DU(1, 2, F(1, 100), 10) == (F(1, 5), 200)
    assert tr.transfer_DU(2, 1, F(1, 4), 4) == (F(1, 4), 4)


def test_singular_transfer_rational():
    t = tr.check_singular_transfer([[F(1, 3), F(1, 3)]], F(1, 10), 3)
    assert t.q == (1, -1) or max(abs(c) for c in t.q) <= 3
    assert t.y is not None


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_singular_transfer_random(seed):
    rng = random.Random(seed)
    A = [[F(rng.randint(0, 6), 7), F(rng.randint(0, 4), 5)]]
    try:
        t = tr.check_singular_transfer(A, F(1, 10), 20)
    except tr.PremiseUnsatisfied:
        return
    assert max(abs(c) for c in t.y) <= t.U


def test_very_singular_exponent():
    _, y_exp, dsup = tr.very_singular_exponents(1, 2, F(1, 2))
    assert y_exp == 2 + F(1, 4)
    rep = tr.very_singular_check([[F(1, 3), F(2, 5)]], F(1, 2), [4, 8, 16])
    assert rep.delta_check == dsup / 2
    assert all(r.q == (3, 0) for r in rep.rows)
    # the transferred bound only kicks in for large X: y = 2 misses it at X = 4
    assert [r.y_holds for r in rep.rows] == [False, True, True]

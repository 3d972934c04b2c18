from fractions import Fraction as F

from hypothesis import given, settings, strategies as st

from dioph_lab import singular as sg
from dioph_lab.exact import QuadraticNumber, frac_dist
from oracles import convergent_denominators

small = st.fractions(min_value=0, max_value=1, max_denominator=9)


def test_zero_matrix_witness():
    w = sg.di_witness(sg.DIQuery([[0], [0]], [F(1, 2)], F(1, 10), 10))
    assert isinstance(w, sg.DIWitness) and w.y == (1,)
    assert w.lhs == 0 and w.scale == F(1, 2)


def test_integer_b_never_witnesses():
    for X in (2, 10, 100):
        w = sg.di_witness(sg.DIQuery([[F(1, 3)]], [2], 1, X))
        assert isinstance(w, sg.NoWitness)


def test_one_third_needs_odd_multiple_of_three():
    w = sg.di_witness(sg.DIQuery([[F(1, 3)]], [F(1, 2)], F(1, 10), 100))
    assert w.y == (3,) and w.lhs == 0


def test_rational_case_split():
    eps = [F(1, 2 ** k) for k in range(1, 7)]
    Xs = [2 ** k for k in range(1, 11)]
    # tA = 2/5, b = 1/3: 15 y-multiples kill the lhs while b.y stays off Z
    assert sg.sing_for_b_profile([[F(2, 5)]], [F(1, 3)], eps, Xs).consistent
    # b = 1/5 with tA = 2/5: b.y is near Z exactly when tA y is, so small eps fails
    assert not sg.sing_for_b_profile([[F(2, 5)]], [F(1, 5)], eps, Xs).consistent


def test_irrational_b_against_rational_matrix():
    b = QuadraticNumber(-1, 1, 2)
    eps = [F(1, 2 ** k) for k in range(1, 6)]
    Xs = [2 ** k for k in range(1, 14)]
    prof = sg.sing_for_b_profile([[F(3, 7)]], [b], eps, Xs)
    assert prof.consistent
    for _, row in prof.verdict_rows():
        assert all(y is None or y[0] % 7 == 0 for y in row)


def test_profile_threshold_needs_a_tail():
    prof = sg.sing_for_b_profile([[F(1, 3)]], [F(1, 2)], [F(1, 10)], [4, 8, 100], min_tail=2)
    # no witness below X = 6 (y = 3 needs 3 < X/2), so the tail starts at 8
    assert prof.thresholds == [8]


@settings(max_examples=40, deadline=None)
@given(small, small, st.sampled_from([F(1, 4), F(1, 2), F(2)]), st.integers(3, 40), st.integers(-2, 2))
def test_witness_invariances(a, b, eps, X, k):
    q = sg.DIQuery([[a]], [b], eps, X)
    w = sg.di_witness(q)
    assert w == sg.di_witness(sg.DIQuery([[a]], [b + k], eps, X))
    assert w == sg.di_witness(q, method="brute")
    if isinstance(w, sg.DIWitness):
        assert 2 * max(abs(c) for c in w.y) < X
        # a larger eps keeps the same y as a witness
        y = w.y[0]
        assert frac_dist(a * y) < 2 * eps * w.scale * F(1, X)
        assert sg.remark_implication_check(q, w).ok


def test_classical_rational_zero():
    w = sg.classical_singular_witness([[F(2, 7)]], F(1, 100), 50)
    assert w.q == (7,) and w.value == 0


def test_dirichlet_level_always_solvable():
    g = QuadraticNumber(F(-1, 2), F(1, 2), 5)
    for X in (2, 3, 10, 57):
        assert isinstance(sg.classical_singular_witness([[g]], 1, X), sg.ClassicalWitness)


def test_golden_surrogate_classical_witness_is_convergent():
    a = F(610, 987)
    qs = convergent_denominators(a)
    for X in (5, 8, 13, 21, 34, 55, 89):
        w = sg.classical_singular_witness([[a]], F(1, 2), X)
        # the first solution is a best approximation, so the smallest admissible convergent
        want = next((q for q in qs if 0 < q < X and frac_dist(q * a) < F(1, 2) / X), None)
        got = w.q[0] if isinstance(w, sg.ClassicalWitness) else None
        assert got == want


def test_remark_boundary_and_vacuous():
    q = sg.DIQuery([[0]], [F(1, 2)], F(1, 10), 10)
    synth = sg.DIWitness((1,), F(0), F(1, 2))
    assert sg.remark_implication_check(q, synth).ok
    assert sg.remark_implication_check(q, sg.NoWitness(5)).vacuous

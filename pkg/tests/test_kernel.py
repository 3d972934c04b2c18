from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from dioph_lab import kernel
from dioph_lab.exact import Power, QuadraticNumber, frac_dist
from oracles import continued_fraction, convergent_denominators

small = st.fractions(min_value=0, max_value=1, max_denominator=9)


def test_badness_profile_linear_for_zero_matrix():
    pair = kernel.AffinePair([[0]], [F(1, 2)])
    prof = kernel.badness_profile(pair, 8)
    # the minimum over each dyadic shell sits at its smallest |q|
    assert [(s.Q, s.value) for s in prof] == [(1, F(1, 2)), (2, 1), (4, F(3, 2)), (8, F(5, 2))]


def test_rational_homogeneous_hits_zero():
    pair = kernel.AffinePair([[F(1, 3)]], [0])
    assert kernel.shell_minimum(pair, 3, 3)[0] == 0
    # an earlier shell stays positive
    assert kernel.shell_minimum(pair, 1, 2)[0] > 0


def test_shell_minimum_zero_in_two_dims():
    pair = kernel.AffinePair([[F(1, 2), F(1, 2)]], [F(1, 2)])
    assert kernel.shell_minimum(pair, 1, 1)[0] == 0


def test_eps_bad_witness_examples():
    pair = kernel.AffinePair([[0]], [F(1, 2)])
    w = kernel.eps_bad_witness(pair, 10, 100)
    assert isinstance(w, kernel.CounterexampleFound) and w.q == (1,)
    assert kernel.eps_bad_witness(pair, F(1, 4), 100) == kernel.NoCounterexampleUpTo(100)


def test_golden_surrogate_has_no_witness_below_one_fifth():
    a = F(34, 55)
    # q |q a|_Z over all q <= 54 stays above 1/5; the minima sit at convergent denominators
    vals = {q: q * frac_dist(q * a) for q in range(1, 55)}
    assert min(vals.values()) > F(1, 5)
    qs = convergent_denominators(a)
    assert min(vals, key=vals.get) in qs
    pair = kernel.AffinePair([[a]], [0])
    assert isinstance(kernel.eps_bad_witness(pair, F(1, 5), 54), kernel.NoCounterexampleUpTo)
    w = kernel.eps_bad_witness(pair, F(1, 2), 54)
    assert isinstance(w, kernel.CounterexampleFound) and abs(w.q[0]) in qs


@settings(max_examples=60, deadline=None)
@given(st.lists(small, min_size=1, max_size=2), small, st.sampled_from([F(1, 8), F(1, 2), F(2)]))
def test_witness_routes_agree(row, b, eps):
    pair = kernel.AffinePair([row], [b])
    a = kernel.eps_bad_witness(pair, eps, 12, method="classes")
    c = kernel.eps_bad_witness(pair, eps, 12, method="brute")
    assert a == c


@settings(max_examples=40, deadline=None)
@given(st.lists(small, min_size=1, max_size=2), small)
def test_shell_minimum_routes_agree(row, b):
    pair = kernel.AffinePair([row], [b])
    assert kernel.shell_minimum(pair, 3, 7, "classes") == kernel.shell_minimum(pair, 3, 7, "brute")


def test_w_hat_rational_infinite():
    out = kernel.w_hat_estimate([[F(2, 7)]], [8, 16])
    assert all(s.zero for s in out)


def test_w_hat_golden_box():
    (s,) = kernel.w_hat_estimate([[F(89, 144)]], [100])
    assert s.argmin == (55,)
    assert s.w < 2


def test_w_hat_quadratic_pair():
    r = QuadraticNumber(-1, 1, 2)
    (s,) = kernel.w_hat_estimate([[r, r]], [6])
    # brute minimum over the box computed directly
    best = min(frac_dist(r * (q1 + q2)) for q1 in range(-5, 6) for q2 in range(-5, 6) if (q1, q2) != (0, 0))
    assert s.min_value == best


def test_best_approximations_fibonacci():
    seq = kernel.best_approx_sequence([[F(89, 144)]], 12, check_rank=False)
    assert seq.Y == [1, 2, 3, 5, 8, 13, 21, 34, 55, 144]
    # every record is a convergent denominator; 89 is not a record since its residue ties 55's
    assert set(seq.Y) <= set(convergent_denominators(F(89, 144)))
    assert continued_fraction(F(89, 144)) == [0] + [1] * 9 + [2]


def test_best_approximations_two_rows_match_scan():
    tA = [[F(89, 144)], [F(55, 89)]]
    seq = kernel.best_approx_sequence(tA, 8, check_rank=False)
    best, records = None, []
    for y in range(1, 201):
        v = max(frac_dist(y * F(89, 144)), frac_dist(y * F(55, 89)))
        if best is None or v < best:
            best = v
            records.append(y)
            if v == 0 or len(records) == 8:
                break
    assert seq.Y == records


def test_rank_deficient():
    with pytest.raises(kernel.RankDeficient):
        kernel.best_approx_sequence([[F(5, 7), F(3, 7)]], 5)


def test_gamma_degenerate_term():
    seq = kernel.BestApproxSequence(
        [kernel.BestApprox((1,), 1, F(0)), kernel.BestApprox((2,), 2, F(1, 4)), kernel.BestApprox((3,), 3, F(1, 9))],
        1, 1, True)
    g = kernel.gamma_sequence(seq, 1, 1)
    # M_1 = 0 kills the first term; the second is (Y_3 M_2)^(1/2)
    assert g[2] == Power.of(F(3, 4), F(1, 2))


def test_gamma_scaling():
    def g(Y, M):
        e = [kernel.BestApprox((y,), y, mm) for y, mm in zip(Y, M)]
        return kernel.gamma_sequence(kernel.BestApproxSequence(e, 1, 2, True), 1, 2)[2]

    Y, M = [1, 2, 4], [F(1, 3), F(1, 5), F(1, 7)]
    # m=1, n=2: each term is Y^(1/3) M^(2/3), so Y -> 8Y doubles gamma
    assert g([8 * y for y in Y], M) == 2 * g(Y, M)
    assert g(Y, M) == max(Power(1, [(2, F(1, 3)), (F(1, 3), F(2, 3))]), Power(1, [(4, F(1, 3)), (F(1, 5), F(2, 3))]))


def test_b_alpha_membership():
    e = [kernel.BestApprox((y,), y, F(1, 10 * y)) for y in (1, 3, 5, 7)]
    seq = kernel.BestApproxSequence(e, 1, 1, True)
    gam = kernel.gamma_sequence(seq, 1, 1)
    # odd y and b = 1/2 give |b y|_Z = 1/2 > alpha gamma_k for small alpha
    assert kernel.b_alpha_membership([F(1, 2)], seq, gam, F(1, 100)).verdict
    # b y integral fails
    assert not kernel.b_alpha_membership([F(1, 3)], seq, gam, F(1, 100)).per_k[2]
    # alpha huge: the bound exceeds 1/2 everywhere
    assert not any(kernel.b_alpha_membership([F(1, 2)], seq, gam, 1000).per_k.values())


def test_cover_construction():
    e = [kernel.BestApprox((1,), 1, F(1)), kernel.BestApprox((5,), 5, F(1, 10)), kernel.BestApprox((6,), 6, F(1, 10))]
    seq = kernel.BestApproxSequence(e, 1, 1, True)
    gam = kernel.GammaSequence({2: Power(F(1, 10))})
    cov = kernel.complement_cover(seq, gam, 1, 2)
    assert cov.centers == [F(j, 5) for j in range(6)]
    assert cov.half_length == F(1, 50)
    assert cov.contains(F(1, 5) + F(1, 50)) and not cov.contains(F(1, 10))
    full = kernel.complement_cover(seq, kernel.GammaSequence({2: Power(1)}), 1, 2)
    assert full.full and full.contains(F(1, 3))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 12), st.fractions(min_value=F(1, 100), max_value=F(2, 5), max_denominator=100))
def test_cover_has_no_escapes(y, r):
    e = [kernel.BestApprox((1,), 1, F(1)), kernel.BestApprox((y,), y, F(1, 10)), kernel.BestApprox((y + 1,), y + 1, F(1))]
    seq = kernel.BestApproxSequence(e, 1, 1, True)
    cov = kernel.complement_cover(seq, kernel.GammaSequence({2: Power(r)}), 1, 2)
    esc = kernel.cover_escapes(lambda x: frac_dist(x * y) <= r, cov, 8 * y * r.denominator)
    assert esc == []


def test_hausdorff_boundaries():
    assert kernel.hausdorff_exponent(1, F(1, 2), 1, 1) == -F(1, 4)
    assert kernel.hausdorff_exponent(0, F(1, 2), 1, 1) == 1
    Y = [2 ** k for k in range(1, 20)]
    assert kernel.hausdorff_sum(Y, 1, F(1, 2), 1, 1).verdict == "converges"
    assert kernel.hausdorff_sum(Y, 0, F(1, 2), 1, 1).verdict == "diverges"


@settings(max_examples=50, deadline=None)
@given(st.fractions(min_value=0, max_value=1, max_denominator=12), st.fractions(min_value=F(1, 8), max_value=4, max_denominator=8))
def test_hausdorff_verdict_follows_exponent_sign(s, delta):
    Y = [2 ** k for k in range(1, 16)]
    h = kernel.hausdorff_sum(Y, s, delta, 1, 1)
    assert h.verdict == ("converges" if h.exponent < 0 else "diverges")

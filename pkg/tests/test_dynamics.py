from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from dioph_lab import dynamics as dyn
from dioph_lab.exact import QuadraticNumber, frac_dist
from dioph_lab.lattice import shortest_grid_vector, successive_minima

E = dyn.ExpMonomial

golden = QuadraticNumber(F(-1, 2), F(1, 2), 5)


def test_make_grid_examples():
    g = dyn.make_grid([[0, 0]], [0])
    assert g.through_origin and g.basis == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    g = dyn.make_grid([[0, 0]], [F(1, 2)])
    assert g.shift == (F(1, 2), 0, 0)
    g = dyn.make_grid([[F(1, 3), F(1, 3)]], [F(1, 2)])
    assert g.basis == ((1, 0, 0), (F(1, 3), 1, 0), (F(1, 3), 0, 1))
    assert g.shift == (F(1, 2), 0, 0)
    # the flow preserves volume
    assert sum(g.rates) == 0


def test_half_shift_closed_form():
    g = dyn.make_grid([[0, 0]], [F(1, 2)])
    for t in (0, 1, F(7, 2), 10):
        s = dyn.flow_delta(g, t)
        assert dyn.mono_equal(s.Delta, E(F(1, 2), F(1)), t)
        assert s.argmin == (F(1, 2), 0, 0)
        assert dyn.mono_equal(s.Delta0, E(F(1), F(-1, 2)), t)


def test_identity_flow_matches_lattice_code():
    g = dyn.make_grid([[F(1, 3), F(2, 5)]], [F(1, 7)])
    s = dyn.flow_delta(g, 0)
    assert s.Delta.c == shortest_grid_vector(g.lattice, g.shift, "sup")
    assert s.Delta0.c == successive_minima(g.lattice, "sup")[0]


def test_lattice_grid_has_zero_delta():
    g = dyn.make_grid([[F(1, 3), F(1, 3)]], [0])
    assert all(not dyn.flow_delta(g, t).Delta.c for t in range(6))


def test_trajectory_envelopes():
    tr = dyn.trajectory(dyn.make_grid([[0, 0]], [F(1, 2)]), range(0, 8))
    vals = [r.mid(1) for r in tr.running_min]
    assert vals == sorted(vals) and vals[-1] > 500  # e^7 / 2
    tr = dyn.trajectory(dyn.make_grid([[0]], [0]), range(0, 5))
    assert all(not s.Delta.c for s in tr.samples)


def test_golden_lattice_stays_in_compact_part():
    # partial quotients are all 1, so q ||q a|| > 1/3 and max(e^t ||q a||, e^-t q) > 3^(-1/2)
    tr = dyn.trajectory(dyn.make_grid([[golden]], [0]), range(0, 8))
    assert all(s.Delta0.mid(s.t) > 3 ** -0.5 for s in tr.samples)
    assert min(q * frac_dist(q * golden) for q in range(1, 200)) > F(1, 3)


def test_delta_bound_examples():
    for row in dyn.delta_bound_check(dyn.make_grid([[0, 0]], [0]), [0]):
        assert row.ok and not row.Delta.c
    D = dyn.lattice_grid([[4, 0, 0], [0, F(1, 2), 0], [0, 0, F(1, 2)]], 1, 2)
    (row,) = dyn.delta_bound_check(D, [0])
    assert row.ok and row.lam_top.c == 4
    for row in dyn.delta_bound_check(dyn.make_grid([[F(1, 3), F(1, 3)]], [F(1, 2)]), range(0, 6)):
        assert row.ok


def test_flowed_minima_at_zero_match_lattice_code():
    g = dyn.make_grid([[F(1, 4)], [F(2, 3)]], [0, 0])
    got = [m.c for m in dyn.successive_minima_flowed(g, 0)]
    assert got == successive_minima(g.lattice, "sup")


def test_p_conjugation_identity_and_rates():
    I = [[int(i == j) for j in range(3)] for i in range(3)]
    c = dyn.p_conjugation(I, 1, 2)
    assert all((e.c == 0) == (i != j) for i, row in enumerate(c.entries) for j, e in enumerate(row))
    p = [[1, 0, 0], [1, 1, 0], [0, 0, 1]]
    c = dyn.p_conjugation(p, 1, 2, c=[0, 1], t_schedule=[0, 1, 2])
    assert c.block_rates["R"] == {F(-3, 2)}
    assert c.block_rates["c"] == {F(-1, 2)}
    assert c.R_block() == [[E(1, F(-3, 2))], [E(0, F(-3, 2))]]
    assert c.constant >= 1


def test_p_conjugation_rejects_non_parabolic():
    with pytest.raises(dyn.BlockShapeError):
        dyn.p_conjugation([[1, 1, 0], [0, 1, 0], [0, 0, 1]], 1, 2)
    with pytest.raises(dyn.BlockShapeError):
        dyn.p_conjugation([[2, 0, 0], [0, 1, 0], [0, 0, 1]], 1, 2)


small = st.fractions(min_value=0, max_value=1, max_denominator=6)


@settings(max_examples=40, deadline=None)
@given(small, small, st.integers(-3, 3), st.integers(0, 6))
def test_shift_reduction_equivariance(a, b, k, t):
    g = dyn.make_grid([[a]], [b])
    h = dyn.make_grid([[a]], [b + k])
    assert g == h
    s = dyn.flow_delta(g, t)
    # a grid vector (k + a z + b, z) is zero only for z = 0, so exactly when b is an integer
    assert (not s.Delta.c) == (b.denominator == 1)


def test_correspondence_examples():
    rep = dyn.correspondence_harness([[0]], [F(1, 2)], list(range(0, 13)), [F(1, 8), F(1, 2), 2], [2, 8, 32, 128])
    assert rep.dyn_verdict == "diverging" and rep.bad_verdict == "infinitely bad"
    assert not rep.contradiction
    rep = dyn.correspondence_harness([[0]], [0], list(range(0, 6)), [F(1, 2)], [2, 8, 32])
    assert rep.dyn_verdict == "zero" and rep.bad_verdict == "not bad"
    rep = dyn.correspondence_harness([[F(1, 3), F(1, 3)]], [F(1, 2)], list(range(0, 9)), [F(1, 2)], [2, 8, 32])
    assert rep.dyn_verdict == "diverging" and not rep.contradiction

import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from dioph_lab import farey as fy
from dioph_lab.exact import Power
from dioph_lab.lattice import det
from oracles import naive_lambda1_perp_sq, naive_successive_minima


def _qpoint(rng, n, qmax=40):
    while True:
        q = rng.randint(1, qmax)
        p = tuple(rng.randint(-q, q) for _ in range(n))
        if math.gcd(*p, q) == 1:
            return fy.QPoint(p, q)


def test_integer_point_gives_standard_lattice():
    L = fy.farey_lattice(fy.QPoint((1, 0), 1))
    assert L.minima_sq == [1, 1]
    assert L.normalized_sq(1) == 1 and L.normalized_sq(2) == 1


def test_half_point():
    L = fy.farey_lattice(fy.QPoint((1, 1), 2))
    assert L.covolume == F(1, 2)
    assert L.lambda_sq(1) == F(1, 2)
    assert L.normalized_sq(1) == 1


def test_third_point():
    L = fy.farey_lattice(fy.QPoint((0, 1), 3))
    assert L.lambda_sq(1) == F(1, 9)
    assert [abs(c) for c in L.minima_vectors[0]] == [0, F(1, 3)]
    # hat-lambda_1^2 = 3 * (1/9)
    assert L.normalized_sq(1) == F(1, 3)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 3))
def test_covolume_and_minima(seed, n):
    x = _qpoint(random.Random(seed), n)
    L = fy.farey_lattice(x)
    assert abs(det([list(v) for v in L.basis.vectors])) == F(1, x.q)
    assert L.minima_sq == naive_successive_minima(L.basis.vectors, "euclidean")


def test_wedge():
    x = fy.QPoint((1, 0), 1)
    assert fy.wedge(x, x) == 0
    assert fy.wedge(x, fy.QPoint((1, 1), 2)) == Power.of(2, F(1, 2))


def test_cone_counts_on_integer_lattice():
    L = fy.farey_lattice(fy.QPoint((0, 0), 1))
    for slope in (F(1), F(1, 2), F(3, 2)):
        cone = fy.cone_decomposition(L, slope)
        for k in range(1, 7):
            assert cone.count(k)[0] == 2 * math.floor(slope * k) + 1
    cone = fy.cone_decomposition(L, 1)
    assert cone.in_cone(cone.alpha_perp)
    assert all(cone.level(a) == 3 for a, _ in cone.points(3))


def test_projection_orthogonal_to_axis_and_diagonal():
    L = fy.farey_lattice(fy.QPoint((0, 0, 0), 1))
    assert fy.lambda1_perp(L, (1, 0, 0)) == 1
    val, raw = fy.lambda1_perp(L, (1, 1, 1), return_raw=True)
    assert raw == F(2, 3) == naive_lambda1_perp_sq((0, 0, 0), 1, (1, 1, 1))
    assert val == Power.of(3, F(1, 2)) * F(2, 3)
    # the projected lattice has covolume 1/|alpha|
    assert fy.projected_lattice(L, (1, 1, 1)).covolume_sq == F(1, 3)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_rank_one_projection_is_normalized(seed):
    rng = random.Random(seed)
    x = _qpoint(rng, 2)
    L = fy.farey_lattice(x)
    cone = fy.cone_decomposition(L, 1)
    for alpha, prim in cone.points(rng.randint(1, 4)):
        if prim:
            assert fy.lambda1_perp(L, alpha) == 1
            f = fy.zeta_fiber(x, alpha, F(1, 2))
            y = f.point(f.l_min)
            assert fy.projected_lattice(L, alpha).covolume_sq == 1 / fy.wedge_sq(x, y)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_lambda1_perp_matches_coset_enumeration(seed):
    rng = random.Random(seed)
    x = _qpoint(rng, 3, qmax=6)
    L = fy.farey_lattice(x)
    alpha = L.minima_vectors[0]
    assert fy.lambda1_perp(L, alpha, return_raw=True)[1] == naive_lambda1_perp_sq(x.p, x.q, alpha)


def test_zeta_fiber_example():
    x = fy.QPoint((1, 0), 1)
    assert fy.zeta_gamma(x, (0, 1), F(1, 2)) == 4
    kids = fy.children_zeta(fy.farey_lattice(x), (0, 1), F(1, 2))
    assert [y.q for y in kids] == [5, 6, 7]
    # alpha = p - q x^ = (0, 1)
    assert all(y.p == (y.q, 1) for y in kids)


def test_zeta_fiber_can_be_empty():
    L = fy.farey_lattice(fy.QPoint((1, 1), 3))
    with pytest.raises(fy.EmptyInterval):
        # gamma < 1/2: the window (gamma, 2 gamma) holds no height of the right class
        fy.children_zeta(L, L.minima_vectors[0], 10)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([F(1, 2), F(1, 4), F(1, 8)]))
def test_zeta_children_primitive_and_in_window(seed, eps):
    rng = random.Random(seed)
    x = _qpoint(rng, 2, qmax=12)
    L = fy.farey_lattice(x)
    cone = fy.cone_decomposition(L, 1)
    for alpha, prim in cone.points(1):
        if not prim:
            continue
        f = fy.zeta_fiber(x, alpha, eps)
        for y in fy.children_zeta(L, alpha, eps, allow_empty=True, limit=20):
            assert math.gcd(*y.p, y.q) == 1
            assert fy._in_zeta_window(x, y, eps)
        rest = fy.restriction("gt", F(1, 2), F(1, 8))
        assert fy.restricted_count(f, rest) == sum(1 for q in f.heights() if rest.passes(q))


def test_children_F_restrictions():
    L = fy.farey_lattice(fy.QPoint((0, 0), 1))
    plain = fy.children_F(L, F(1, 2), 2)
    odd = fy.children_F(L, F(1, 2), 2, fy.restriction("ge", F(1, 2), F(1, 2)))
    assert odd == [y for y in plain if y.q % 2 == 1]
    assert len(odd) < len(plain)


@pytest.fixture(scope="module")
def tree3():
    sched = fy.make_schedule(F(1, 4), F(1, 4), 2)
    return fy.build_tree(fy.QPoint((0, 0), 1), sched, F(1, 2), depth=3)


def test_tree_shape_and_geometry(tree3):
    assert len(tree3.level(1)) == 1 and len(tree3.level(3)) > 0
    for node in tree3.nodes[1:]:
        if node.level >= 2:
            parent = tree3.nodes[node.parent]
            assert fy.ball_nested(node, parent)
            assert node.diam_sq < parent.diam_sq
            assert fy._in_zeta_window(parent.x, node.x, parent.eps)
        for rec in node.counts:
            assert rec.upper_bound and rec.floor_half_bound


def test_tree_chains_certified(tree3):
    for path in tree3.paths():
        cert = fy.chain_certificate(tree3, path)
        assert cert.ok and len(cert.steps) == 2
    assert fy.chain_certificate(tree3, tree3.paths()[0][:1]).steps == []


def test_best_approximation_along_chain(tree3):
    checks = fy.best_approximation_check(tree3, tree3.paths()[0])
    assert all(c.ok for c in checks) and any(c.checked for c in checks)


def test_selfsimilar_report(tree3):
    rep = fy.validate_selfsimilar(tree3, F(4, 3) - F(1, 4))
    assert rep.all_nested and rep.all_rho_decrease
    assert set(rep.per_level) == {1, 2}


def test_di_eps_tree_has_odd_heights():
    sched = fy.make_schedule(F(1, 4), F(1, 4), 2)
    tree = fy.build_tree(fy.QPoint((0, 0), 1), sched, F(1, 2), depth=2, mode="di_eps")
    assert all(v.x.q % 2 == 1 for v in tree.nodes[1:])
    for path in tree.paths():
        assert fy.chain_certificate(tree, path).ok


def test_s1_on_integer_lattice():
    L = fy.farey_lattice(fy.QPoint((0, 0), 1))
    rep = fy.s1_diagnostic(L, F(1, 2), 6, 2)
    assert rep.exponent == 1
    # C'_k holds (a, k), |a| <= k; the primitive ones are gcd(a, k) = 1
    want = [(k, 2 * k + 1, sum(1 for a in range(-k, k + 1) if math.gcd(a, k) == 1)) for k in range(1, 7)]
    assert rep.per_k == want
    assert rep.exact == sum(F(g, c) / k for k, c, g in want)


def test_csv_rows(tree3):
    rows = list(fy.tree_csv_rows(tree3))
    assert len(rows) == len(tree3.nodes)
    assert all(len(r) == len(fy.TREE_CSV_HEADER) for r in rows)
    assert rows[0][2] == ""

"""Farey lattices, cones and the b-restricted self-similar trees (m = 1, n >= 2).

A rational point x = (p, q) in Z^{n+1} (gcd 1, q > 0) has height |x| = q and
image x^ = p / q. Its Farey lattice is Z^n + Z x^ (covolume 1/q); children of
x in the fibre over a primitive alpha are the points (p0 + l p, q0 + l q) whose
heights fall in the window (g, 2g), g = (|alpha| |x| / eps)^{n/(n-1)}.

Euclidean lengths are stored squared; quantities with fractional exponents
are :class:`~dioph_lab.exact.Power` values. Statements involving sums of
square roots are decided either exactly (``sqrt_sum_less``) or with certified
interval enclosures.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath
from mpmath import iv

from .exact import Power, as_fraction, frac_dist, is_rational_scalar, sqrt_sum_less, to_rational
from .intervals import certify_lt, to_iv
from .kernel import _scalar
from .lattice import (
    LatticeBasis,
    ResourceError,
    dot,
    dual_shortest,
    enumerate_ball,
    lattice_from_generators,
    lll_reduce,
    matmul,
    shortest_vector,
    successive_minima,
    transpose,
    unimodular_completion,
    vscale,
    vsub,
)


class DegenerateLattice(ValueError):
    pass


class EmptyInterval(ValueError):
    pass


class EmptyLevel(RuntimeError):
    def __init__(self, level, node):
        super().__init__(f"node {node} at level {level} has no restricted children")
        self.level = level
        self.node = node


class CertificateFailure(AssertionError):
    def __init__(self, step, check, detail=""):
        super().__init__(f"step {step}: {check} failed {detail}".strip())
        self.step = step
        self.check = check


def _gcd_all(vals) -> int:
    g = 0
    for v in vals:
        g = math.gcd(g, int(v))
    return g


def _xgcd_list(vals):
    """(g, coeffs) with sum(c*v) = g = gcd(vals) >= 0."""
    g, coeffs = 0, []
    for v in vals:
        a, b = g, int(v)
        x0, y0, x1, y1 = 1, 0, 0, 1
        while b:
            t, a, b = a // b, b, a % b
            x0, x1 = x1, x0 - t * x1
            y0, y1 = y1, y0 - t * y1
        if a < 0:
            a, x0, y0 = -a, -x0, -y0
        coeffs = [c * x0 for c in coeffs] + [y0]
        g = a
    return g, coeffs


# --------------------------------------------------------------------------
# points and lattices


@dataclass(frozen=True)
class QPoint:
    p: tuple
    q: int

    def __post_init__(self):
        p = tuple(int(c) for c in self.p)
        q = int(self.q)
        if q <= 0:
            raise ValueError("height must be positive")
        if _gcd_all(p + (q,)) != 1:
            raise ValueError(f"({p}, {q}) is not primitive")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def n(self) -> int:
        return len(self.p)

    @property
    def height(self) -> int:
        return self.q

    @property
    def hat(self):
        return tuple(Fraction(c, self.q) for c in self.p)

    def to_json(self):
        return {"p": list(self.p), "q": self.q}


def wedge_sq(x: QPoint, y: QPoint) -> Fraction:
    """|x ^ y|^2 = |x|^2 |y|^2 |x^ - y^|^2."""
    d = vsub(x.hat, y.hat)
    return Fraction(x.q * x.q * y.q * y.q) * dot(d, d)


def wedge(x: QPoint, y: QPoint) -> Power:
    return Power.of(wedge_sq(x, y), Fraction(1, 2)) if wedge_sq(x, y) else Power(0)


@dataclass
class FareyLattice:
    x: QPoint
    basis: LatticeBasis
    minima_sq: list
    minima_vectors: list

    @property
    def n(self) -> int:
        return self.x.n

    @property
    def covolume(self) -> Fraction:
        return self.basis.covolume

    def lambda_sq(self, i: int = 1) -> Fraction:
        return self.minima_sq[i - 1]

    def normalized_sq(self, i: int = 1) -> Power:
        """hat-lambda_i^2 = |x|^{2/n} lambda_i^2."""
        return Power.of(self.x.q, Fraction(2, self.n)) * self.minima_sq[i - 1]

    def coordinates(self, v):
        c = self.basis.coordinates(v)
        if c is None or any(a.denominator != 1 for a in c):
            return None
        return tuple(int(a) for a in c)

    def is_primitive(self, v) -> bool:
        c = self.coordinates(v)
        return c is not None and _gcd_all(c) == 1


def farey_lattice(x: QPoint) -> FareyLattice:
    n = x.n
    gens = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)] + [x.hat]
    B = lattice_from_generators(gens)
    red, _ = lll_reduce(B.vectors)
    B = LatticeBasis(tuple(red))
    vals, vecs = successive_minima(B, "euclidean", return_vectors=True)
    return FareyLattice(x, B, vals, vecs)


# --------------------------------------------------------------------------
# cone decomposition


@dataclass
class ConeDecomposition:
    L: FareyLattice
    slope: Fraction  # A_n, tangent of the cone half-angle
    w: tuple  # shortest dual vector; H'(k) = {v : <v, w> = k}
    w_norm_sq: Fraction
    tie: bool
    v1: tuple  # lattice vector with <v1, w> = 1
    sub_basis: tuple  # LLL basis of the codimension-one sublattice <v, w> = 0

    @property
    def alpha_perp(self):
        return vscale(1 / self.w_norm_sq, self.w)

    @property
    def sublattice_covolume_sq(self) -> Fraction:
        return self.L.basis.covolume ** 2 * self.w_norm_sq

    def level(self, v) -> Fraction:
        return dot(v, self.w)

    def in_cone(self, v) -> bool:
        """Angle between v and alpha_perp at most arctan(slope)."""
        t = dot(v, self.w)
        if t < 0:
            return False
        par_sq = t * t / self.w_norm_sq
        return dot(v, v) - par_sq <= self.slope ** 2 * par_sq

    def points(self, k: int):
        """Lattice points of C'_k, sorted by squared norm then lexicographically.

        Yields (alpha, primitive) with primitivity in Lambda_x.
        """
        if k < 1:
            raise ValueError("k must be >= 1")
        v1 = self.v1
        ap = self.alpha_perp
        v1_perp = vsub(v1, ap)
        center = tuple(-k * c for c in v1_perp)
        radius_sq = self.slope ** 2 * k * k / self.w_norm_sq
        out = []
        for coeffs, lam, _ in enumerate_ball(self.sub_basis, radius_sq, center):
            alpha = tuple(k * a + b for a, b in zip(v1, lam))
            prim = math.gcd(k, _gcd_all(coeffs)) == 1
            out.append((alpha, prim))
        out.sort(key=lambda t: (dot(t[0], t[0]), t[0]))
        return out

    def count(self, k: int):
        """(all points, primitive points) of C'_k."""
        pts = self.points(k)
        return len(pts), sum(1 for _, p in pts if p)


def cone_decomposition(L: FareyLattice, slope=1) -> ConeDecomposition:
    n = L.n
    if n < 2:
        raise ValueError("cones need n >= 2")
    slope = as_fraction(slope)
    if slope <= 0:
        raise ValueError("cone slope must be positive")
    ds = dual_shortest(L.basis)
    w = ds.vector
    # integer coordinates of w in the dual basis are the values <b_i, w>
    a = [dot(b, w) for b in L.basis.vectors]
    if any(x.denominator != 1 for x in a):
        raise AssertionError("dual vector pairs non-integrally with the lattice")
    T, _ = unimodular_completion([int(x) for x in a])
    Tt = transpose(T)
    new = matmul(Tt, L.basis.vectors)
    v1 = tuple(new[0])
    sub = [tuple(r) for r in new[1:]]
    sub_red, _ = lll_reduce(sub)
    return ConeDecomposition(L, slope, tuple(w), ds.value_sq, ds.tie, v1, tuple(tuple(r) for r in sub_red))


# --------------------------------------------------------------------------
# projections orthogonal to alpha


def lambda1_perp(L: FareyLattice, alpha, return_raw: bool = False):
    """Normalized first minimum of the projection of Lambda_x onto alpha-perp.

    Returned squared: hat-lambda_1(alpha)^2 = (|x| |alpha|)^{2/(n-1)} lambda_1(alpha)^2.
    With ``return_raw`` the pair (value, lambda_1(alpha)^2) is returned.
    """
    n = L.n
    c = L.coordinates(alpha)
    if c is None or _gcd_all(c) != 1:
        raise ValueError("alpha must be a primitive lattice vector")
    alpha = tuple(as_fraction(x) for x in alpha)
    na = dot(alpha, alpha)
    _, Ti = unimodular_completion(c)
    rows = matmul(Ti, L.basis.vectors)
    proj = [vsub(r, vscale(dot(r, alpha) / na, alpha)) for r in rows[1:]]
    raw = shortest_vector(LatticeBasis(tuple(proj)), "euclidean")[0]
    val = Power.of(L.x.q * L.x.q * na, Fraction(1, n - 1)) * raw
    return (val, raw) if return_raw else val


def projected_lattice(L: FareyLattice, alpha) -> LatticeBasis:
    c = L.coordinates(alpha)
    _, Ti = unimodular_completion(c)
    alpha = tuple(as_fraction(x) for x in alpha)
    na = dot(alpha, alpha)
    rows = matmul(Ti, L.basis.vectors)
    return LatticeBasis(tuple(vsub(r, vscale(dot(r, alpha) / na, alpha)) for r in rows[1:]))


# --------------------------------------------------------------------------
# children


@dataclass(frozen=True)
class Restriction:
    """Condition on the height q of a child: |bq|_Z > t, >= t, or none."""

    kind: str = "none"  # none | gt | ge
    b: object = None
    threshold: object = None

    def passes(self, q: int) -> bool:
        if self.kind == "none":
            return True
        v = frac_dist(self.b * q)
        return v > self.threshold if self.kind == "gt" else v >= self.threshold

    def period(self):
        if self.kind == "none":
            return 1
        if is_rational_scalar(self.b):
            return to_rational(self.b).denominator
        return None


def restriction(kind="none", b=None, threshold=None) -> Restriction:
    if kind == "none":
        return Restriction()
    if kind not in ("gt", "ge"):
        raise ValueError(f"unknown restriction {kind!r}")
    return Restriction(kind, _scalar(b), as_fraction(threshold))


@dataclass(frozen=True)
class Fiber:
    x: QPoint
    alpha: tuple
    q0: int
    p0: tuple
    gamma: object  # (|alpha| |x| / eps)^{n/(n-1)}
    l_min: int
    l_max: int

    @property
    def count(self) -> int:
        return max(0, self.l_max - self.l_min + 1)

    def point(self, l: int) -> QPoint:
        return QPoint(tuple(a + l * b for a, b in zip(self.p0, self.x.p)), self.q0 + l * self.x.q)

    def heights(self):
        s = self.x.q
        return range(self.q0 + self.l_min * s, self.q0 + self.l_max * s + 1, s)


def fiber_base(x: QPoint, alpha):
    """(p0, q0) with p0 - q0 x^ = alpha and 0 <= q0 < |x|."""
    s = x.q
    alpha = tuple(as_fraction(a) for a in alpha)
    sa = [a * s for a in alpha]
    if any(v.denominator != 1 for v in sa):
        raise ValueError("alpha is not in the Farey lattice")
    g, u = _xgcd_list(list(x.p) + [s])
    assert g == 1
    k = sum(ui * int(v) for ui, v in zip(u, sa)) % s
    q0 = (-k) % s
    p0 = [a + Fraction(q0 * r, s) for a, r in zip(alpha, x.p)]
    if any(v.denominator != 1 for v in p0):
        raise ValueError("alpha is not in the Farey lattice")
    return tuple(int(v) for v in p0), q0


def zeta_gamma(x: QPoint, alpha, eps):
    n = x.n
    na = dot(alpha, alpha)
    eps = as_fraction(eps)
    base = na * x.q * x.q / (eps * eps)
    e = Fraction(n, 2 * (n - 1))
    g = Power.of(base, e)
    return g.scalar() if g.is_scalar else g


def zeta_fiber(x: QPoint, alpha, eps) -> Fiber:
    """The fibre over alpha with the window gamma < q < 2 gamma resolved to l-bounds."""
    p0, q0 = fiber_base(x, alpha)
    g = zeta_gamma(x, alpha, eps)
    lo = math.floor(g) + 1  # smallest integer > g
    hi = math.ceil(2 * g) - 1  # largest integer < 2g
    s = x.q
    l_min = -((q0 - lo) // s)  # ceil((lo - q0)/s)
    l_max = (hi - q0) // s
    return Fiber(x, tuple(as_fraction(a) for a in alpha), q0, p0, g, l_min, l_max)


def children_zeta(L: FareyLattice, alpha, eps, allow_empty: bool = False, limit: Optional[int] = None):
    """zeta(x, alpha, eps): children over alpha in increasing height."""
    f = zeta_fiber(L.x, alpha, eps)
    if f.count == 0 and not allow_empty:
        raise EmptyInterval(f"no height in ({f.gamma}, 2*{f.gamma}) congruent to {f.q0} mod {L.x.q}")
    top = f.l_max if limit is None else min(f.l_max, f.l_min + limit - 1)
    return [f.point(l) for l in range(f.l_min, top + 1)]


def restricted_count(f: Fiber, rest: Restriction, enum_cap: int = 10**6) -> int:
    """Exact number of children in the fibre passing the height restriction."""
    if rest.kind == "none" or f.count == 0:
        return f.count
    d = rest.period()
    s = f.x.q
    if d is None:
        if f.count > enum_cap:
            raise ResourceError(f"fibre of {f.count} heights exceeds the enumeration cap")
        return sum(1 for q in f.heights() if rest.passes(q))
    total = 0
    for t in range(d):
        if not rest.passes(f.q0 + (f.l_min + t) * s):
            continue
        first = f.l_min + t
        if first > f.l_max:
            continue
        total += (f.l_max - first) // d + 1
    return total


def restricted_children(f: Fiber, rest: Restriction, limit: Optional[int] = None):
    out = []
    for l in range(f.l_min, f.l_max + 1):
        q = f.q0 + l * f.x.q
        if rest.passes(q):
            out.append(f.point(l))
            if limit is not None and len(out) >= limit:
                break
    return out


def lambda_hat_qualifies(L: FareyLattice, alpha, eps) -> bool:
    """alpha in Lambda_x(eps), given alpha primitive."""
    eps = as_fraction(eps)
    if L.n == 2:
        # rank-one projection: hat-lambda_1(alpha) = 1 identically
        return eps < 1
    return lambda1_perp(L, alpha) > eps * eps


def cone_alphas(cone: ConeDecomposition, eps, N: int):
    """Primitive alpha in Lambda_x(eps) intersected with C_N(x), in (k, norm, lex) order."""
    for k in range(1, N + 1):
        for alpha, prim in cone.points(k):
            if prim and lambda_hat_qualifies(cone.L, alpha, eps):
                yield k, alpha


def children_F(L: FareyLattice, eps, N: int, rest: Restriction = Restriction(), slope=1,
               max_alpha: Optional[int] = None, max_children_per_alpha: Optional[int] = None):
    """F_N(x, eps) filtered by the height restriction (optionally truncated)."""
    cone = cone_decomposition(L, slope)
    out = []
    used = 0
    for _, alpha in cone_alphas(cone, eps, N):
        f = zeta_fiber(L.x, alpha, eps)
        kids = restricted_children(f, rest, max_children_per_alpha)
        if not kids:
            continue
        out.extend(kids)
        used += 1
        if max_alpha is not None and used >= max_alpha:
            break
    return out


# --------------------------------------------------------------------------
# schedule and tree


@dataclass(frozen=True)
class Schedule:
    eta: Fraction
    delta: Fraction
    n: int
    N_cap: Optional[int] = 50
    c_rho: Fraction = Fraction(1)

    def eps(self, i: int) -> Fraction:
        return Fraction(self.eta) / 4 ** i

    def N(self, i: int) -> int:
        raw = Power.of(5, Fraction(self.n) / Fraction(self.delta) * i) / Fraction(self.eta)
        v = math.ceil(raw)
        return v if self.N_cap is None else min(v, self.N_cap)

    def rho(self, i: int) -> Power:
        n = self.n
        return (self.c_rho * Power.of(Fraction(1, self.N(i)), Fraction(n + 1, n - 1))
                * Power.of(self.eps(i), Fraction(2 * n, n - 1) + n))


def make_schedule(eta, delta, n: int, N_cap: Optional[int] = 50, c_rho=1) -> Schedule:
    eta, delta = as_fraction(eta), as_fraction(delta)
    if eta <= 0 or delta <= 0:
        raise ValueError("eta and delta must be positive")
    return Schedule(eta, delta, n, N_cap, as_fraction(c_rho))


@dataclass
class CountRecord:
    alpha: tuple
    card: int
    card_restricted: int

    @property
    def half_bound(self) -> bool:
        return 2 * self.card_restricted >= self.card

    @property
    def floor_half_bound(self) -> bool:
        return self.card_restricted >= self.card // 2

    @property
    def upper_bound(self) -> bool:
        return self.card_restricted <= self.card


@dataclass
class FractalNode:
    id: int
    x: QPoint
    level: int
    parent: Optional[int]
    alpha: Optional[tuple]  # fibre direction from the parent
    lattice: FareyLattice
    eps: Fraction
    N: int
    rho: Power
    children: list = field(default_factory=list)
    counts: list = field(default_factory=list)
    parent_clears: Optional[bool] = None  # |b|x||_Z above the level threshold

    @property
    def radius_sq(self) -> Fraction:
        return self.lattice.lambda_sq(1) / (4 * self.x.q * self.x.q)

    @property
    def diam_sq(self) -> Fraction:
        return self.lattice.lambda_sq(1) / (self.x.q * self.x.q)

    def rho_diam(self) -> Power:
        return self.rho * Power.of(self.diam_sq, Fraction(1, 2))

    def to_json(self):
        from .exact import to_json_value

        return {
            "id": self.id,
            "p": list(self.x.p),
            "q": self.x.q,
            "level": self.level,
            "ball_center": [to_json_value(c) for c in self.x.hat],
            "ball_radius_sq": to_json_value(self.radius_sq),
            "rho": to_json_value(self.rho),
            "children_ids": list(self.children),
        }


@dataclass
class FractalTree:
    nodes: list
    schedule: Schedule
    b: object
    mode: str
    d: Optional[int]
    slope: Fraction
    depth: int
    caps: dict

    def level(self, i: int):
        return [v for v in self.nodes if v.level == i]

    def paths(self):
        """Root-to-leaf paths over the levels 1..depth (the root x0 excluded)."""
        out = []

        def walk(i, acc):
            node = self.nodes[i]
            acc = acc + [i]
            if not node.children:
                out.append(acc)
            for c in node.children:
                walk(c, acc)

        for top in self.level(1):
            walk(top.id, [])
        return out

    def to_json(self):
        from .exact import to_json_value

        return {
            "mode": self.mode,
            "b": to_json_value(self.b),
            "d": self.d,
            "eta": to_json_value(self.schedule.eta),
            "delta": to_json_value(self.schedule.delta),
            "n": self.schedule.n,
            "N_cap": self.schedule.N_cap,
            "cone_slope": to_json_value(self.slope),
            "depth": self.depth,
            "caps": dict(self.caps),
            "nodes": [v.to_json() for v in self.nodes],
        }


def _level_rule(schedule: Schedule, mode: str, b, d, i: int):
    """(eps, N, restriction for children of a level-i node)."""
    if mode == "sing_b":
        return schedule.eps(i), schedule.N(i), restriction("gt", b, schedule.eta / 2 ** (i + 1))
    if mode == "di_eps":
        return schedule.eps(0), schedule.N(0), restriction("ge", b, Fraction(1, d))
    raise ValueError(f"unknown mode {mode!r}")


def build_tree(root: QPoint, schedule: Schedule, b, depth: int, mode: str = "sing_b", d: Optional[int] = None,
               slope=1, max_alpha: int = 3, max_children_per_alpha: int = 2, alpha_scan: int = 64,
               x1: Optional[QPoint] = None) -> FractalTree:
    """Levels Q_1 .. Q_depth of the restricted tree (the root x0 is level 0).

    Every expanded node records exact fibre counts for the first
    ``alpha_scan`` cone directions; only ``max_alpha`` directions and
    ``max_children_per_alpha`` children per direction are expanded.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    n = root.n
    if n < 2 or schedule.n != n:
        raise ValueError("tree needs n >= 2 matching the schedule")
    b = _scalar(b)
    slope = as_fraction(slope)
    if mode == "di_eps":
        if not is_rational_scalar(b):
            raise ValueError("di_eps mode needs rational b")
        d = to_rational(b).denominator
        if d < 2:
            raise ValueError("b must not be an integer")
    nodes: list = []

    def new_node(x, level, parent, alpha):
        eps, N, _ = _level_rule(schedule, mode, b, d, level)
        node = FractalNode(len(nodes), x, level, parent, alpha, farey_lattice(x), eps, N, schedule.rho(level))
        nodes.append(node)
        return node

    r = new_node(root, 0, None, None)
    eps0, N0, rest0 = _level_rule(schedule, mode, b, d, 0)
    if x1 is None:
        if mode == "sing_b":
            rest0 = restriction("gt", b, schedule.eta / 2)
        kids = []
        cone = cone_decomposition(r.lattice, slope)
        for _, alpha in cone_alphas(cone, eps0, N0):
            f = zeta_fiber(root, alpha, eps0)
            kids.extend((y, alpha) for y in restricted_children(f, rest0, 1))
        if not kids:
            raise EmptyLevel(0, root)
        kids.sort(key=lambda t: (t[0].q, t[0].p))
        x1, a1 = kids[0]
    else:
        a1 = tuple(a - x1.q * c for a, c in zip(x1.p, root.hat))
    top = new_node(x1, 1, r.id, tuple(a1))
    r.children.append(top.id)
    frontier = [top]
    for level in range(1, depth):
        nxt = []
        for node in frontier:
            eps, N, rest = _level_rule(schedule, mode, b, d, level)
            node.parent_clears = _clears(node.x.q, b, mode, schedule, level, d)
            cone = cone_decomposition(node.lattice, slope)
            used = 0
            scanned = 0
            for _, alpha in cone_alphas(cone, eps, N):
                f = zeta_fiber(node.x, alpha, eps)
                if scanned < alpha_scan:
                    node.counts.append(CountRecord(alpha, f.count, restricted_count(f, rest)))
                    scanned += 1
                if used < max_alpha:
                    kids = restricted_children(f, rest, max_children_per_alpha)
                    if kids:
                        used += 1
                        for y in kids:
                            c = new_node(y, level + 1, node.id, alpha)
                            node.children.append(c.id)
                            nxt.append(c)
                if used >= max_alpha and scanned >= alpha_scan:
                    break
            if not node.children:
                raise EmptyLevel(level, node.x)
        frontier = nxt
    caps = {"max_alpha": max_alpha, "max_children_per_alpha": max_children_per_alpha, "alpha_scan": alpha_scan}
    return FractalTree(nodes, schedule, b, mode, d, slope, depth, caps)


def _clears(q, b, mode, schedule, level, d):
    v = frac_dist(b * q)
    if mode == "sing_b":
        return v > schedule.eta / 2 ** level
    return v >= Fraction(1, d)


# --------------------------------------------------------------------------
# validation


def ball_nested(child: FractalNode, parent: FractalNode) -> bool:
    """B(child) strictly inside B(parent): |c - p| + r_c < r_p, decided exactly."""
    diff = vsub(child.x.hat, parent.x.hat)
    return sqrt_sum_less(dot(diff, diff), child.radius_sq, parent.radius_sq)


def _sqrt_iv(x):
    return iv.sqrt(to_iv(x))


def balls_close(y: FractalNode, z: FractalNode, gap: Power) -> bool:
    """d(B(y), B(z)) <= gap, i.e. |y^ - z^| <= r_y + r_z + gap (certified)."""
    diff = vsub(y.x.hat, z.x.hat)
    dist_sq = dot(diff, diff)

    def lhs():
        return _sqrt_iv(y.radius_sq) + _sqrt_iv(z.radius_sq) + to_iv(gap)

    return not certify_lt(lhs, lambda: _sqrt_iv(dist_sq))


@dataclass
class NodeReport:
    id: int
    level: int
    children: int
    nested: bool
    diam_decrease: bool
    rho_decrease: bool
    separation: int
    sum_ratio: float
    log10_sum_ratio: float


@dataclass
class SelfSimilarReport:
    s: Fraction
    nodes: list
    per_level: dict  # level -> dict(min, max ratio, etc.)

    @property
    def all_nested(self) -> bool:
        return all(r.nested and r.diam_decrease for r in self.nodes)

    @property
    def all_rho_decrease(self) -> bool:
        return all(r.rho_decrease for r in self.nodes)

    @property
    def max_separation(self) -> int:
        return max((r.separation for r in self.nodes), default=0)


def _log_rho_diam(node: FractalNode):
    with mpmath.workdps(40):
        return mpmath.log(mpmath.mpf(to_iv(node.rho).mid)) + mpmath.log(mpmath.mpf(node.diam_sq.numerator)) / 2 \
            - mpmath.log(mpmath.mpf(node.diam_sq.denominator)) / 2


def sum_ratio(node: FractalNode, children, s) -> mpmath.mpf:
    """sum over children of (rho diam)^s divided by (rho(x) diam B(x))^s."""
    s = mpmath.mpf(as_fraction(s).numerator) / as_fraction(s).denominator
    with mpmath.workdps(40):
        base = _log_rho_diam(node)
        return mpmath.fsum(mpmath.exp(s * (_log_rho_diam(c) - base)) for c in children)


def validate_selfsimilar(tree: FractalTree, s) -> SelfSimilarReport:
    s = as_fraction(s)
    reports = []
    for node in tree.nodes:
        if node.level == 0 or not node.children:
            continue
        kids = [tree.nodes[c] for c in node.children]
        nested = all(ball_nested(c, node) for c in kids)
        decrease = all(c.diam_sq < node.diam_sq for c in kids)
        rho_decrease = all(c.rho_diam() < node.rho_diam() for c in kids)
        gap = node.rho_diam()
        sep = 0
        for y in kids:
            near = sum(1 for z in kids if z is not y and balls_close(y, z, gap))
            sep = max(sep, near)
        ratio = sum_ratio(node, kids, s)
        reports.append(NodeReport(node.id, node.level, len(kids), nested, decrease, rho_decrease, sep,
                                  float(ratio), float(mpmath.log10(ratio))))
    per_level: dict = {}
    for r in reports:
        lv = per_level.setdefault(r.level, {"nodes": 0, "min_ratio": math.inf, "max_ratio": 0.0})
        lv["nodes"] += 1
        lv["min_ratio"] = min(lv["min_ratio"], r.sum_ratio)
        lv["max_ratio"] = max(lv["max_ratio"], r.sum_ratio)
    return SelfSimilarReport(s, reports, per_level)


# --------------------------------------------------------------------------
# the full-children sum ratio (n = 2)


def _phi(k: int) -> int:
    out, m, p = k, k, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            out -= out // p
        p += 1
    if m > 1:
        out -= out // m
    return out


@dataclass
class FullRatio:
    value: float
    log10: float
    exact_alphas: int
    integrated_rows: int


def full_sum_ratio(tree: FractalTree, node: FractalNode, s, j_exact: int = 4000, l_exact: int = 2000) -> FullRatio:
    """Sum ratio over all restricted children of ``node`` (not just the built ones), n = 2.

    For n = 2 a child y over alpha has lambda_1(y) = |alpha| |x| / |y|, so each
    term is (rho' |alpha| |x| / |y|^2)^s with rho' the next level's rho. Short
    fibres and cone rows are summed term by term; long ones use the density
    of restricted heights (resp. of primitive directions, phi(k)/k) against
    the matching integral.
    """
    if node.x.n != 2:
        raise ValueError("closed-form child data is only available for n = 2")
    eps, N, rest = _level_rule(tree.schedule, tree.mode, tree.b, tree.d, node.level)
    cone = cone_decomposition(node.lattice, tree.slope)
    sx = node.x.q
    d = rest.period()
    if d is None:
        raise ValueError("needs a rational restriction")
    if math.gcd(sx, d) != 1:
        raise ValueError("restricted heights are not equidistributed along fibres")
    density = mpmath.mpf(sum(1 for r in range(d) if rest.passes(r))) / d
    sf = mpmath.mpf(as_fraction(s).numerator) / as_fraction(s).denominator
    with mpmath.workdps(30):
        base = _log_rho_diam(node)
        lrho = mpmath.log(to_iv(tree.schedule.rho(node.level + 1)).mid)
        epsf = mpmath.mpf(eps.numerator) / eps.denominator
        e1 = 1 - 2 * sf
        window = (2 ** e1 - 1) / e1

        def smooth(na):
            # |alpha|^2 = na; sum over restricted heights in (g, 2g) stepping by sx
            g = na * sx * sx / epsf ** 2
            coef = mpmath.exp(sf * (lrho + mpmath.log(mpmath.sqrt(na) * sx)))
            return coef * density * g ** e1 * window / sx

        def exact_fibre(alpha):
            f = zeta_fiber(node.x, alpha, eps)
            na = dot(alpha, alpha)
            if f.count > l_exact:
                return smooth(mpmath.mpf(na.numerator) / na.denominator)
            la = mpmath.log(mpmath.sqrt(mpmath.mpf(na.numerator) / na.denominator) * sx)
            return mpmath.fsum(mpmath.exp(sf * (lrho + la - 2 * mpmath.log(q))) for q in f.heights() if rest.passes(q))

        total = mpmath.mpf(0)
        exact_alphas = integrated = 0
        u = cone.sub_basis[0]
        uu = dot(u, u)
        t = dot(vsub(cone.v1, cone.alpha_perp), u) / uu
        uuf = mpmath.mpf(uu.numerator) / uu.denominator
        wwf = mpmath.mpf(cone.w_norm_sq.numerator) / cone.w_norm_sq.denominator
        for k in range(1, N + 1):
            half = (mpmath.mpf(cone.slope.numerator) / cone.slope.denominator) * k / mpmath.sqrt(wwf * uuf)
            if 2 * half <= j_exact:
                for alpha, prim in cone.points(k):
                    if prim:
                        total += exact_fibre(alpha)
                        exact_alphas += 1
                continue
            integrated += 1
            cf = -k * (mpmath.mpf(t.numerator) / t.denominator)
            c2 = mpmath.mpf(k * k) / wwf
            total += mpmath.mpf(_phi(k)) / k * mpmath.quad(lambda z: smooth(uuf * (z - cf) ** 2 + c2),
                                                         [cf - half, cf, cf + half])
        ratio = total * mpmath.exp(-sf * base)
        return FullRatio(float(ratio), float(mpmath.log10(ratio)), exact_alphas, integrated)


# --------------------------------------------------------------------------
# S_1 diagnostic


@dataclass
class S1Report:
    N: int
    t: Fraction
    exponent: Fraction  # 1 + (t - n) n / (n - 1)
    per_k: list  # (k, card C'_k, card of qualifying alpha)
    value: float
    comparator: float  # sum of k^{-exponent}
    exact: Optional[Fraction] = None

    @property
    def ratio(self) -> float:
        return self.value / self.comparator


def s1_diagnostic(L: FareyLattice, eps, N: int, t, slope=1) -> S1Report:
    if N < 1:
        raise ValueError("N must be >= 1")
    n = L.n
    t = as_fraction(t)
    eps = as_fraction(eps)
    e = 1 + (t - n) * Fraction(n, n - 1)
    cone = cone_decomposition(L, slope)
    per_k = []
    for k in range(1, N + 1):
        pts = cone.points(k)
        good = sum(1 for a, prim in pts if prim and lambda_hat_qualifies(L, a, eps))
        per_k.append((k, len(pts), good))
    exact = None
    if e.denominator == 1:
        exact = sum((Fraction(g, c) / Fraction(k) ** e.numerator for k, c, g in per_k if c), Fraction(0))
    ef = mpmath.mpf(e.numerator) / e.denominator
    value = mpmath.fsum(mpmath.mpf(g) / c * mpmath.power(k, -ef) for k, c, g in per_k if c)
    comp = mpmath.fsum(mpmath.power(k, -ef) for k in range(1, N + 1))
    return S1Report(N, t, e, per_k, float(value), float(comp), exact)


# --------------------------------------------------------------------------
# chain certificates


@dataclass
class ChainStep:
    i: int
    q: int
    X_lo: Fraction
    X_hi: Fraction
    level_eps: Power  # eps' of the twisted system certified on (X_lo, X_hi]
    checks: dict


@dataclass
class ChainCertificate:
    path: list
    steps: list

    @property
    def ok(self) -> bool:
        return all(all(s.checks.values()) for s in self.steps)


def _sup_dev_iv(x: QPoint, center, r_sq):
    """Upper enclosure of max over the ball of ||q theta - p||_sup."""
    dev = max(abs(x.q * c - p) for c, p in zip(center, x.p))
    return to_iv(dev) + x.q * iv.sqrt(to_iv(r_sq))


def chain_certificate(tree: FractalTree, path, raise_on_failure: bool = True) -> ChainCertificate:
    """Check the twisted Dirichlet inequalities along a root-to-leaf path.

    theta ranges over the deepest ball of the path; sup-norm deviations are
    bounded by |q c - p| + q r with interval arithmetic. For each consecutive
    pair x_i, x_{i+1} the X-window is (eta^{-1} 2^i |x_i|, eta^{-1} 2^{i+1} |x_{i+1}|]
    (mode sing_b) or (d |x_i|, d |x_{i+1}|] (mode di_eps).
    """
    nodes = [tree.nodes[i] if isinstance(i, int) else i for i in path]
    steps: list = []
    if len(nodes) < 2:
        return ChainCertificate([v.id for v in nodes], steps)
    leaf = nodes[-1]
    center, r_sq = leaf.x.hat, leaf.radius_sq
    n = leaf.x.n
    en = Fraction(1, n)
    eta = tree.schedule.eta
    b = tree.b
    for node, nxt in zip(nodes, nodes[1:]):
        i = node.level
        x, y = node.x, nxt.x
        eps = node.eps
        bq = frac_dist(b * x.q)
        if tree.mode == "sing_b":
            X_lo = Fraction(2 ** i * x.q) / eta
            X_hi = Fraction(2 ** (i + 1) * y.q) / eta
            lvl = Power(2) * Power.of(2, en) * eps * Power.of(Fraction(2 ** i) / eta, 1 + en)
            clear = bq > eta / 2 ** i
            height = eta / 2 ** i * X_lo >= x.q and eta / 2 ** i < bq
        else:
            d = tree.d
            X_lo = Fraction(d * x.q)
            X_hi = Fraction(d * y.q)
            lvl = 2 * eps * Power.of(d, 1 + en)
            clear = bq >= Fraction(1, d)
            height = X_lo / d >= x.q and Fraction(1, d) <= bq
        bound_a = 2 * eps * Power.of(y.q, -en)
        bound_final = lvl * bq * Power.of(X_hi, -en) if bq else Power(0)

        def lhs():
            return _sup_dev_iv(x, center, r_sq)

        checks = {
            "window nonempty": X_lo < X_hi,
            "deviation < 2 eps_i |x_{i+1}|^(-1/n)": certify_lt(lhs, lambda: to_iv(bound_a)),
            "|b q_i| clears level threshold": clear,
            "deviation < eps' |b q_i| X^(-1/n) at window end": bool(bq) and certify_lt(lhs, lambda: to_iv(bound_final)),
            "|q_i| < |b q_i| X on the window": height,
            "child in restricted fibre window": _in_zeta_window(x, y, eps),
        }
        step = ChainStep(i, x.q, X_lo, X_hi, lvl, checks)
        steps.append(step)
        if raise_on_failure:
            for name, ok in checks.items():
                if not ok:
                    raise CertificateFailure(i, name, f"(q_i={x.q}, q_(i+1)={y.q})")
    return ChainCertificate([v.id for v in nodes], steps)


def _in_zeta_window(x: QPoint, y: QPoint, eps) -> bool:
    alpha = tuple(a - y.q * c for a, c in zip(y.p, x.hat))
    g = zeta_gamma(x, alpha, eps)
    return g < y.q and y.q < 2 * g if not isinstance(g, Power) else (g < y.q and Power(y.q) < 2 * g)


@dataclass
class BestApproxCheck:
    node: int
    q: int
    checked: bool
    ok: bool
    worst: Optional[int] = None  # first q' that fails


def best_approximation_check(tree: FractalTree, path, q_cap: int = 200_000):
    """Each x_i on the path is a best approximation to every point of the deepest ball.

    Verified for x_i with |x_i| <= q_cap by comparing with every 0 < q < |x_i|:
    min over the ball of |q theta - P|_2 must exceed max over it of |q_i theta - p_i|_2.
    """
    nodes = [tree.nodes[i] if isinstance(i, int) else i for i in path]
    leaf = nodes[-1]
    P, D = leaf.x.p, leaf.x.q
    lam_sq = leaf.lattice.lambda_sq(1)  # r^2 D^2 = lam^2 / 4
    out = []
    for node in nodes[:-1]:
        x = node.x
        if x.q > q_cap:
            out.append(BestApproxCheck(node.id, x.q, False, True))
            continue
        Bi = sum((x.q * pj - pij * D) ** 2 for pj, pij in zip(P, x.p))  # scaled by D^2
        bad = None
        for q in range(1, x.q):
            A = 0
            for pj in P:
                num = q * pj
                near = (2 * num + D) // (2 * D)
                A += (num - near * D) ** 2
            C = Fraction((q + x.q) ** 2) * lam_sq / 4
            if not sqrt_sum_less(Bi, C, A):
                bad = q
                break
        out.append(BestApproxCheck(node.id, x.q, True, bad is None, bad))
    return out


# --------------------------------------------------------------------------
# flat export

TREE_CSV_HEADER = ["id", "level", "parent", "p", "q", "alpha", "radius_sq", "eps", "N", "children"]


def tree_csv_rows(tree: FractalTree):
    """One row per node; vectors are space-separated, exact values as p/q."""
    for v in tree.nodes:
        yield [
            v.id,
            v.level,
            "" if v.parent is None else v.parent,
            " ".join(str(c) for c in v.x.p),
            v.x.q,
            "" if v.alpha is None else " ".join(str(c) for c in v.alpha),
            str(v.radius_sq),
            str(v.eps),
            v.N,
            " ".join(str(c) for c in v.children),
        ]

"""Unimodular grids under the diagonal flow.

For an m x n matrix A and b in R^m the grid is

    Lambda_{A,b} = u_A Z^{m+n} + (b, 0),    u_A = [[I_m, A], [0, I_n]],

and a_t = diag(e^{t/m} I_m, e^{-t/n} I_n). At a fixed rational t every
coordinate of a_t v is c * e^{r t} with exact c and rational r, so sup norms
are "exponential monomials". Two monomials are equal only when they agree
structurally (or t = 0 and the coefficients agree), since e^q is irrational
for rational q != 0; every other comparison is settled by interval
arithmetic at rising precision.

Delta, Delta_0 and the successive minima are computed exactly from the
residue classes of the bottom coordinates (see below).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath
from mpmath import iv

from .exact import QuadraticNumber, as_fraction, is_rational_scalar, to_rational
from .intervals import certify_lt, to_iv
from .kernel import AffinePair, CounterexampleFound, _scalar, eps_bad_witness
from .lattice import (LatticeBasis, ResourceError, inverse, rank, shortest_grid_vector, shortest_vector,
                      sign_normalize)
from .lattice import successive_minima as lattice_successive_minima
from .search import shell


class BlockShapeError(ValueError):
    """A matrix is not in the parabolic subgroup P."""


# --------------------------------------------------------------------------
# exponential monomials


@dataclass(frozen=True)
class ExpMonomial:
    """c * e^{r t} with c >= 0 exact and r rational."""

    c: object
    r: Fraction

    def at(self, t):
        """Interval enclosure at rational t."""
        if not self.c:
            return iv.mpf(0)
        return to_iv(self.c) * iv.exp(to_iv(self.r * as_fraction(t)))

    def mid(self, t) -> float:
        x = self.at(t)
        return (float(x.a) + float(x.b)) / 2

    def __mul__(self, other):
        if isinstance(other, ExpMonomial):
            return ExpMonomial(self.c * other.c, self.r + other.r)
        return ExpMonomial(self.c * other, self.r)

    __rmul__ = __mul__

    def to_json(self):
        return {"c": str(self.c), "r": str(self.r)}


ZERO = ExpMonomial(Fraction(0), Fraction(0))


def mono_equal(a: ExpMonomial, b: ExpMonomial, t) -> bool:
    if not a.c or not b.c:
        return not a.c and not b.c
    return a.c == b.c and (a.r == b.r or as_fraction(t) * (a.r - b.r) == 0)


def mono_lt(a: ExpMonomial, b: ExpMonomial, t) -> bool:
    """a < b at time t, exactly."""
    if mono_equal(a, b, t):
        return False
    if not a.c:
        return True
    if not b.c:
        return False
    if a.r == b.r or as_fraction(t) == 0:
        return a.c < b.c
    return certify_lt(lambda: a.at(t), lambda: b.at(t))


def mono_le(a, b, t) -> bool:
    return not mono_lt(b, a, t)


def mono_max(items, t):
    """(index, monomial) of the first maximum."""
    best_i, best = None, None
    for i, x in enumerate(items):
        if best is None or mono_lt(best, x, t):
            best_i, best = i, x
    return best_i, best


# --------------------------------------------------------------------------
# grids


@dataclass(frozen=True)
class Grid:
    """basis rows (exact, generate a unimodular lattice) plus a reduced shift."""

    basis: tuple
    shift: tuple
    m: int
    n: int

    def __post_init__(self):
        d = self.m + self.n
        basis = tuple(tuple(_scalar(x) for x in row) for row in self.basis)
        if len(basis) != d or any(len(r) != d for r in basis):
            raise ValueError("basis must be (m+n) x (m+n)")
        shift = tuple(_scalar(x) for x in self.shift)
        if len(shift) != d:
            raise ValueError("shift has the wrong dimension")
        if abs(_det_exact(basis)) != 1:
            raise ValueError("grid lattice must be unimodular")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "shift", _reduce_shift(basis, shift))

    @property
    def d(self) -> int:
        return self.m + self.n

    @property
    def rates(self):
        return (Fraction(1, self.m),) * self.m + (Fraction(-1, self.n),) * self.n

    @property
    def rational(self) -> bool:
        return all(is_rational_scalar(x) for r in self.basis for x in r)

    @property
    def lattice(self) -> LatticeBasis:
        if not self.rational:
            raise ValueError("lattice is not rational")
        return LatticeBasis(tuple(tuple(to_rational(x) for x in r) for r in self.basis))

    @property
    def through_origin(self) -> bool:
        return all(x == 0 for x in self.shift)

    def point(self, z, with_shift: bool = True):
        d = self.d
        out = [sum((z[j] * self.basis[j][i] for j in range(d)), Fraction(0)) for i in range(d)]
        if with_shift:
            out = [x + s for x, s in zip(out, self.shift)]
        return tuple(out)


def _det_exact(M):
    d = len(M)
    if d == 1:
        return M[0][0]
    total = Fraction(0)
    for j in range(d):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        total = total + (-1) ** j * M[0][j] * _det_exact(minor)
    return total


def _is_upper_unitriangular(basis):
    d = len(basis)
    return all(basis[i][i] == 1 and all(basis[i][j] == 0 for j in range(i + 1, d)) for i in range(d))


def _reduce_shift(basis, shift):
    """Canonical representative of shift modulo the lattice.

    For upper unitriangular bases (every u_A) the coordinates of the shift
    are reduced into [0, 1) from the last one up; for rational bases the
    coordinates in the basis are reduced. Other bases keep the shift.
    """
    d = len(basis)
    if _is_upper_unitriangular(basis):
        s = list(shift)
        for i in range(d - 1, -1, -1):
            k = math.floor(s[i])
            if k:
                s = [x - k * basis[i][j] for j, x in enumerate(s)]
        return tuple(s)
    if all(is_rational_scalar(x) for r in basis for x in r) and all(is_rational_scalar(x) for x in shift):
        B = [[to_rational(x) for x in r] for r in basis]
        Binv = inverse(B)
        coords = [sum((to_rational(shift[j]) * Binv[j][i] for j in range(d)), Fraction(0)) for i in range(d)]
        frac = [c - math.floor(c) for c in coords]
        return tuple(sum((frac[i] * B[i][j] for i in range(d)), Fraction(0)) for j in range(d))
    return tuple(shift)


def make_grid(A, b) -> Grid:
    """u_A Z^{m+n} + (b, 0); rows of the basis are the columns of u_A."""
    A = [tuple(_scalar(x) for x in row) for row in A]
    m, n = len(A), len(A[0])
    b = tuple(_scalar(x) for x in b)
    if len(b) != m:
        raise ValueError("b must have m entries")
    d = m + n
    cols = []
    for j in range(d):
        col = [Fraction(0)] * d
        if j < m:
            col[j] = Fraction(1)
        else:
            for i in range(m):
                col[i] = A[i][j - m]
            col[j] = Fraction(1)
        cols.append(tuple(col))
    return Grid(tuple(cols), b + (Fraction(0),) * n, m, n)


def lattice_grid(basis, m: int, n: int) -> Grid:
    """A grid through the origin with the given unimodular basis rows."""
    d = m + n
    return Grid(tuple(basis), (Fraction(0),) * d, m, n)


# --------------------------------------------------------------------------
# exact search by residue classes
#
# A vector of Lambda_{A,b} is (k + A z + b, z) with k in Z^m, z in Z^n. For a
# fixed z the best k is the componentwise nearest integer, so
#
#     |a_t v| >= max(e^{t/m} ||A z + b||_Z, e^{-t/n} |z|)
#
# with equality for that k. For rational A the first term depends only on z
# modulo the common denominator L, and the second is minimised by the
# minimal-norm representative of the class.


def _u_block(grid: Grid):
    """The block A when the basis is u_A (rows = columns), else None."""
    m, n, d = grid.m, grid.n, grid.d
    B = grid.basis
    for j in range(m):
        if B[j] != tuple(Fraction(int(i == j)) for i in range(d)):
            return None
    A = [[None] * n for _ in range(m)]
    for j in range(m, d):
        if any(B[j][i] != int(i == j) for i in range(m, d)):
            return None
        for i in range(m):
            A[i][j - m] = B[j][i]
    return A


def _class_period(A):
    L = 1
    for row in A:
        for x in row:
            if not is_rational_scalar(x):
                return None
            q = to_rational(x).denominator
            L = L * q // math.gcd(L, q)
    return L


def _min_rep(r, L):
    """Minimal sup-norm integer vector congruent to r mod L (ties to the positive value)."""
    out = []
    for x in r:
        x %= L
        out.append(x if x <= L - x else x - L)
    return tuple(out)


def _Az(A, z):
    return [sum((a * c for a, c in zip(row, z)), Fraction(0)) for row in A]


def _nearest(x):
    """Nearest integer, ties to the smaller one."""
    f = math.floor(x)
    return f if x - f <= (f + 1) - x else f + 1


def _candidate(grid: Grid, A, z, t, with_shift: bool):
    """(norm monomial, unflowed vector) for bottom part z with the best top."""
    m = grid.m
    x = _Az(A, z)
    if with_shift:
        x = [a + s for a, s in zip(x, grid.shift[:m])]
    top = [a - _nearest(a) for a in x]
    items = [ExpMonomial(abs(c), r) if c else ZERO for c, r in zip(list(top) + [Fraction(c) for c in z], grid.rates)]
    return mono_max(items, t)[1], tuple(top) + tuple(Fraction(c) for c in z)


def _scan_classes(grid: Grid, A, L, t, with_shift: bool, exclude_zero: bool):
    n = grid.n
    cands = []
    for r in itertools.product(range(L), repeat=n):
        z = _min_rep(r, L)
        if exclude_zero and not any(z):
            z = (L,) + (0,) * (n - 1)
        cands.append(_candidate(grid, A, z, t, with_shift))
    return cands


def _approx(mono: ExpMonomial, t) -> float:
    return float(mono.c) * math.exp(float(mono.r * t)) if mono.c else 0.0


def _scan_shells(grid: Grid, A, t, with_shift: bool, exclude_zero: bool, best, cap: int):
    """Shell-by-shell scan for irrational A; stops once e^{-t/n} N exceeds the best value.

    Floats only discard candidates that are clearly (relative gap 1e-9)
    worse than the current leader; the survivors are compared exactly.
    Lattice scans (no shift) visit one of each pair +-z.
    """
    n = grid.n
    keep = [] if best is None else [best]
    lead = None if best is None else _approx(best[0], t)
    rate = Fraction(-1, n)
    N = 1 if exclude_zero else 0
    slack = 1e-9
    while True:
        if keep:
            floor_N = ExpMonomial(Fraction(N), rate)
            if _approx(floor_N, t) > lead * (1 + slack) and mono_lt(min_mono(keep, t)[0], floor_N, t):
                return keep
        if N > cap:
            raise ResourceError(f"shell scan exceeded |z| <= {cap}; lower t or raise the cap")
        for z in shell(n, N, canonical=not with_shift):
            cand = _candidate(grid, A, z, t, with_shift)
            v = _approx(cand[0], t)
            if lead is None or v < lead * (1 - slack):
                lead = v
                keep = [c for c in keep if _approx(c[0], t) <= lead * (1 + slack)]
            if v <= lead * (1 + slack):
                keep.append(cand)
        N += 1


def min_mono(cands, t, symmetric: bool = False):
    """(value, vector, number of candidates attaining it); first of the ties is kept.

    With ``symmetric`` the vectors v and -v count once.
    """
    best, vec, tied = None, None, set()
    for val, v in cands:
        key = sign_normalize(v) if symmetric else tuple(v)
        if best is None or mono_lt(val, best, t):
            best, vec, tied = val, v, {key}
        elif mono_equal(val, best, t):
            tied.add(key)
    return best, vec, len(tied)


def grid_delta(grid: Grid, t, cap: int = 10**5):
    """(Delta(a_t x), realising unflowed grid vector, class ties)."""
    t = as_fraction(t)
    A = _u_block(grid)
    if A is None:
        if t != 0 or not grid.rational:
            raise ValueError("only u_A grids can be flowed; other grids are supported at t = 0")
        val, vec = shortest_grid_vector(grid.lattice, grid.shift, "sup", return_vector=True)
        return (ExpMonomial(val, Fraction(0)) if val else ZERO), vec, 1
    if grid.through_origin:
        return ZERO, (Fraction(0),) * grid.d, 1
    L = _class_period(A)
    if L is not None:
        return min_mono(_scan_classes(grid, A, L, t, True, False), t)
    return min_mono(_scan_shells(grid, A, t, True, False, None, cap), t)


def lattice_delta0(grid: Grid, t, cap: int = 10**5):
    """(Delta_0(a_t pi(x)), realising unflowed lattice vector, class ties)."""
    t = as_fraction(t)
    A = _u_block(grid)
    if A is None:
        if t != 0 or not grid.rational:
            raise ValueError("only u_A grids can be flowed; other grids are supported at t = 0")
        val, vec = shortest_vector(grid.lattice, "sup")
        return ExpMonomial(val, Fraction(0)), vec, 1
    m = grid.m
    unit = (ExpMonomial(Fraction(1), Fraction(1, m)), (Fraction(1),) + (Fraction(0),) * (grid.d - 1))
    L = _class_period(A)
    if L is not None:
        return min_mono([unit] + _scan_classes(grid, A, L, t, False, True), t, symmetric=True)
    return min_mono(_scan_shells(grid, A, t, False, True, unit, cap), t, symmetric=True)


def _span_dim(grid: Grid, A, L, a, N):
    """dim span of lattice vectors with |top| <= a and |bottom| <= N (unflowed)."""
    m, n = grid.m, grid.n
    gens = []
    units = set(range(m)) if a >= 1 else set()
    wide = set()
    for r in itertools.product(range(L), repeat=n):
        reps = []
        for x in r:
            vals = [v for v in range(-N, N + 1) if (v - x) % L == 0]
            if not vals:
                break
            reps.append(vals)
        else:
            x = _Az(A, r)
            tops = []
            for c in x:
                opts = [c - k for k in (math.floor(c) - 1, math.floor(c), math.floor(c) + 1, math.floor(c) + 2) if abs(c - k) <= a]
                if not opts:
                    break
                tops.append(opts)
            else:
                z0 = tuple(v[0] for v in reps)
                if any(z0) or any(top[0] for top in tops):
                    gens.append(tuple(top[0] for top in tops) + z0)
                for i, opts in enumerate(tops):
                    if len(opts) > 1:
                        units.add(i)
                for j, vals in enumerate(reps):
                    if len(vals) > 1:
                        wide.add(j)
    d = grid.d
    for i in units:
        gens.append(tuple(Fraction(int(k == i)) for k in range(d)))
    for j in wide:
        gens.append(tuple(Fraction(int(k == m + j)) for k in range(d)))
    return rank(gens) if gens else 0


def successive_minima_flowed(grid: Grid, t):
    """Sup-norm successive minima of a_t pi(grid) as exact monomials (rational u_A grids).

    With top bound a = j/L and bottom bound N the span dimension is
    computable class by class; lambda_k is the smallest max(e^{t/m} j/L,
    e^{-t/n} N) whose box spans k dimensions.
    """
    t = as_fraction(t)
    A = _u_block(grid)
    if A is None:
        if t != 0 or not grid.rational:
            raise ValueError("only u_A grids can be flowed; other grids are supported at t = 0")
        return [ExpMonomial(v, Fraction(0)) for v in lattice_successive_minima(grid.lattice, "sup")]
    L = _class_period(A)
    if L is None:
        raise ValueError("successive minima need a rational A")
    m, n = grid.m, grid.n
    out = []
    for k in range(1, grid.d + 1):
        best = None
        for j in range(L + 1):
            a = Fraction(j, L)
            if _span_dim(grid, A, L, a, L) < k:
                continue
            lo, hi = 0, L
            while lo < hi:
                mid = (lo + hi) // 2
                if _span_dim(grid, A, L, a, mid) >= k:
                    hi = mid
                else:
                    lo = mid + 1
            top = ExpMonomial(a, Fraction(1, m)) if a else ZERO
            bot = ExpMonomial(Fraction(lo), Fraction(-1, n)) if lo else ZERO
            val = bot if mono_lt(top, bot, t) else top
            if best is None or mono_lt(val, best, t):
                best = val
        out.append(best)
    return out


# --------------------------------------------------------------------------
# samples and trajectories


@dataclass
class TrajectorySample:
    t: Fraction
    Delta: ExpMonomial
    Delta0: ExpMonomial
    argmin: tuple  # grid vector (unflowed) realising Delta
    argmin0: tuple  # lattice vector (unflowed) realising Delta0
    ties: bool = False  # another residue class attains the same value
    minima: Optional[list] = None  # successive minima as monomials

    def intervals(self, dps: int = 30):
        with mpmath.workdps(dps):
            d, d0 = self.Delta.at(self.t), self.Delta0.at(self.t)
        return (d.a, d.b, d0.a, d0.b)


def flow_delta(grid: Grid, t, with_minima: bool = False, cap: int = 10**5, with_delta0: bool = True) -> TrajectorySample:
    """Delta(a_t x) and Delta_0(a_t pi(x)) as exact monomials.

    Irrational A is scanned shell by shell up to ``cap``; Delta_0 is skipped
    (left as None) when ``with_delta0`` is false.
    """
    if grid.d > 4:
        raise ValueError("flow_delta needs m + n <= 4")
    t = as_fraction(t)
    delta, z, c1 = grid_delta(grid, t, cap)
    d0, z0, c2 = lattice_delta0(grid, t, cap) if with_delta0 else (None, None, 0)
    minima = successive_minima_flowed(grid, t) if with_minima else None
    return TrajectorySample(t, delta, d0, tuple(z), sign_normalize(z0) if z0 else None, c1 > 1 or c2 > 1, minima)


def frozen(mono: ExpMonomial, t) -> ExpMonomial:
    """The number mono(t) as a monomial to be read at t = 1."""
    return ExpMonomial(mono.c, mono.r * as_fraction(t)) if mono.c else ZERO


ONE = Fraction(1)


@dataclass
class Trajectory:
    samples: list
    running_min: list  # min of Delta over samples j >= i, frozen (read at t = 1)
    running_max0: list  # max of Delta0 over samples j <= i, frozen

    @property
    def ts(self):
        return [s.t for s in self.samples]


def trajectory(grid: Grid, t_schedule, with_minima: bool = False, with_delta0: bool = True) -> Trajectory:
    ts = [as_fraction(t) for t in t_schedule]
    if any(b <= a for a, b in zip(ts, ts[1:])):
        raise ValueError("t schedule must be increasing")
    samples = [flow_delta(grid, t, with_minima, with_delta0=with_delta0) for t in ts]
    tail, cur = [], None
    for s in reversed(samples):
        v = frozen(s.Delta, s.t)
        cur = v if cur is None or mono_lt(v, cur, ONE) else cur
        tail.append(cur)
    tail.reverse()
    rmax, cur = [], None
    for s in samples if with_delta0 else []:
        v = frozen(s.Delta0, s.t)
        cur = v if cur is None or mono_lt(cur, v, ONE) else cur
        rmax.append(cur)
    return Trajectory(samples, tail, rmax)


# --------------------------------------------------------------------------
# the Delta <= (m+n) lambda_{m+n} bound


@dataclass
class DeltaBoundRow:
    t: Fraction
    Delta: ExpMonomial
    lam_top: ExpMonomial
    product: ExpMonomial
    checks: dict

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def delta_bound_check(grid: Grid, t_schedule):
    """Check Delta <= (m+n) lambda_{m+n} and 1/(m+n)! <= prod lambda_i <= 1 at every t."""
    d = grid.d
    rows = []
    for t in t_schedule:
        t = as_fraction(t)
        s = flow_delta(grid, t, with_minima=True)
        lam = s.minima
        prod = lam[0]
        for x in lam[1:]:
            prod = prod * x
        top = lam[-1] * Fraction(d)
        one = ExpMonomial(Fraction(1), Fraction(0))
        low = ExpMonomial(Fraction(1, math.factorial(d)), Fraction(0))
        checks = {
            "Delta <= (m+n) lambda_top": mono_le(s.Delta, top, t),
            "prod lambda >= 1/(m+n)!": mono_le(low, prod, t),
            "prod lambda <= 1": mono_le(prod, one, t),
            "minima nondecreasing": all(mono_le(a, b, t) for a, b in zip(lam, lam[1:])),
        }
        rows.append(DeltaBoundRow(t, s.Delta, lam[-1], prod, checks))
    return rows


# --------------------------------------------------------------------------
# conjugating the parabolic subgroup


@dataclass
class Conjugated:
    """a_t p a_{-t}: entry (i, j) is entries[i][j] = ExpMonomial(p_ij, r_i - r_j) (signed c)."""

    m: int
    n: int
    entries: list
    c_part: list  # ExpMonomial(c_k, -1/n) for the bottom coordinates
    block_rates: dict
    constant: Optional[float] = None  # max over the schedule of the operator-norm bounds

    def R_block(self):
        return [row[: self.m] for row in self.entries[self.m:]]


def _block_check(M, m, n):
    d = m + n
    if len(M) != d or any(len(r) != d for r in M):
        raise BlockShapeError("p must be (m+n) x (m+n)")
    for i in range(m):
        for j in range(m, d):
            if M[i][j] != 0:
                raise BlockShapeError("upper-right block must vanish")
    S = [r[:m] for r in M[:m]]
    Q = [r[m:] for r in M[m:]]
    if _det_exact(S) * _det_exact(Q) != 1:
        raise BlockShapeError("need det S * det Q = 1")


def _op_bound(entries, t):
    """Interval upper bound for the sup-norm operator norm (max row l1 sum)."""
    best = None
    for row in entries:
        s = iv.mpf(0)
        for e in row:
            if e.c:
                s = s + abs(to_iv(e.c)) * iv.exp(to_iv(e.r * as_fraction(t)))
        best = s.b if best is None or s.b > best else best
    return best


def p_conjugation(p, m: int, n: int, c=None, t_schedule=None) -> Conjugated:
    """Symbolic conjugation a_t p a_{-t} for p = ((S, 0), (R, Q)) with translation (0, c).

    With a t-schedule the instance constant K = max_t max(|a_t p a_-t|, |a_t p^-1 a_-t|)
    is reported; it bounds |a_t p v| / |a_t v| from both sides.
    """
    p = [[_scalar(x) for x in row] for row in p]
    _block_check(p, m, n)
    d = m + n
    c = [Fraction(0)] * n if c is None else [_scalar(x) for x in c]
    if len(c) != n:
        raise BlockShapeError("c must have n entries")
    rates = (Fraction(1, m),) * m + (Fraction(-1, n),) * n
    entries = [[ExpMonomial(p[i][j], rates[i] - rates[j]) for j in range(d)] for i in range(d)]
    c_part = [ExpMonomial(x, Fraction(-1, n)) for x in c]
    block_rates = {
        "S": {e.r for row in entries[:m] for e in row[:m]},
        "R": {e.r for row in entries[m:] for e in row[:m]},
        "Q": {e.r for row in entries[m:] for e in row[m:]},
        "c": {e.r for e in c_part},
    }
    out = Conjugated(m, n, entries, c_part, block_rates)
    if t_schedule is not None:
        pinv = inverse([[to_rational(x) for x in row] for row in p]) if all(is_rational_scalar(x) for r in p for x in r) else None
        inv_entries = None
        if pinv is not None:
            inv_entries = [[ExpMonomial(pinv[i][j], rates[i] - rates[j]) for j in range(d)] for i in range(d)]
        K = None
        with mpmath.workdps(30):
            for t in t_schedule:
                k1 = _op_bound(entries, t)
                k2 = _op_bound(inv_entries, t) if inv_entries else k1
                k = max(k1, k2)
                K = k if K is None or k > K else K
        out.constant = float(K)
    return out


# --------------------------------------------------------------------------
# combining the two kinds of evidence


@dataclass
class CorrespondenceReport:
    A: tuple
    b: tuple
    dyn_verdict: str  # zero | decaying | bounded | diverging
    bad_verdict: str  # not bad | bounded | infinitely bad
    contradiction: bool
    delta_rows: list  # (t, Delta monomial, frozen tail running min)
    bad_rows: list  # (eps, [witness q or None per Q shell])
    slack: Fraction = Fraction(2)


def _dyn_verdict(traj: Trajectory, slack):
    """zero | decaying | diverging | bounded, from exact comparisons of sampled values.

    diverging: the minimum over the second half of the schedule exceeds
    slack * Delta(t_0); decaying: it is below Delta(t_0) / slack.
    """
    s = traj.samples
    if all(not x.Delta.c for x in s):
        return "zero"
    v0 = frozen(s[0].Delta, s[0].t)
    tail = traj.running_min[len(s) // 2]
    if v0.c and mono_lt(slack * v0, tail, ONE):
        return "diverging"
    if mono_lt(slack * tail, v0, ONE):
        return "decaying"
    return "bounded"


def _bad_verdict(pair: AffinePair, eps_schedule, Q_schedule, min_tail: int):
    rows = []
    clean = []
    for eps in eps_schedule:
        row = []
        for lo, hi in zip([0] + list(Q_schedule[:-1]), Q_schedule):
            w = eps_bad_witness(pair, eps, hi, Qmin=lo + 1)
            row.append(w.q if isinstance(w, CounterexampleFound) else None)
        rows.append((eps, row))
        tail = row[-min_tail:]
        clean.append(all(x is None for x in tail))
    if all(clean):
        return "infinitely bad", rows
    if not clean[0] and all(x is not None for x in rows[0][1][-min_tail:]):
        return "not bad", rows
    return "bounded", rows


def correspondence_harness(A, b, t_schedule, eps_schedule, Q_schedule, slack=2, min_tail: int = 2) -> CorrespondenceReport:
    """Delta growth along a_t next to finite eps-badness verdicts for the same pair.

    A contradiction is diverging Delta with a "not bad" profile, or a zero or
    decaying Delta with an "infinitely bad" profile. Bounded readings on
    either side are never contradictions.
    """
    if not t_schedule or not eps_schedule or not Q_schedule:
        raise ValueError("schedules must be nonempty")
    slack = as_fraction(slack)
    grid = make_grid(A, b)
    traj = trajectory(grid, t_schedule, with_delta0=False)
    dv = _dyn_verdict(traj, slack)
    pair = AffinePair(A, b)
    bv, bad_rows = _bad_verdict(pair, sorted(as_fraction(e) for e in eps_schedule), list(Q_schedule), min_tail)
    contra = (dv == "diverging" and bv == "not bad") or (dv in ("zero", "decaying") and bv == "infinitely bad")
    delta_rows = [(s.t, s.Delta, r) for s, r in zip(traj.samples, traj.running_min)]
    return CorrespondenceReport(tuple(map(tuple, A)), tuple(b), dv, bv, contra, delta_rows, bad_rows, slack)


# ten fixtures: rational pairs, Kronecker obstructions, badly approximable controls
CORRESPONDENCE_FIXTURES = [
    ("rational: A=0, b=0", [[Fraction(0)]], [Fraction(0)]),
    ("rational: A=1/3, b=1/3", [[Fraction(1, 3)]], [Fraction(1, 3)]),
    ("rational: A=(1/2,1/2), b=1/2", [[Fraction(1, 2), Fraction(1, 2)]], [Fraction(1, 2)]),
    ("kronecker: A=0, b=1/2", [[Fraction(0)]], [Fraction(1, 2)]),
    ("kronecker: A=1/3, b=1/2", [[Fraction(1, 3)]], [Fraction(1, 2)]),
    ("kronecker: A=(0,0), b=1/2", [[Fraction(0), Fraction(0)]], [Fraction(1, 2)]),
    ("kronecker: A=(1/3,1/3), b=1/2", [[Fraction(1, 3), Fraction(1, 3)]], [Fraction(1, 2)]),
    ("kronecker: A=(1/2;1/2), b=(1/2,0)", [[Fraction(1, 2)], [Fraction(1, 2)]], [Fraction(1, 2), Fraction(0)]),
    ("control: A=(sqrt5-1)/2, b=0", [[QuadraticNumber(Fraction(-1, 2), Fraction(1, 2), 5)]], [Fraction(0)]),
    ("control: A=sqrt2-1, b=0", [[QuadraticNumber(-1, 1, 2)]], [Fraction(0)]),
]

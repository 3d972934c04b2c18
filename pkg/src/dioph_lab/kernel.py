"""Finite-range Diophantine functionals for a pair (A, b).

A is an m x n matrix (rows), b a vector of length m. q ranges over Z^n and
y over Z^m; all norms are sup norms. Values of the form ||q||^{n/m} * r
are exact :class:`~dioph_lab.exact.Power` objects.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exact import Power, QuadraticNumber, as_fraction, frac_dist, parse_exact
from .lattice import rank
from .search import (
    ResidualForm,
    class_min_norm,
    class_min_norm_at_least,
    classes,
    scan,
    shell,
    signed_shell,
    use_classes,
)


def _scalar(x):
    if isinstance(x, (QuadraticNumber, Fraction)):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return parse_exact(x)


@dataclass(frozen=True)
class AffinePair:
    """A in M_{m,n} (tuple of m rows) and b in R^m."""

    A: tuple
    b: tuple

    def __post_init__(self):
        A = tuple(tuple(_scalar(x) for x in row) for row in self.A)
        b = tuple(_scalar(x) for x in self.b)
        if not A or not A[0]:
            raise ValueError("A must be a nonempty matrix")
        if len({len(r) for r in A}) != 1:
            raise ValueError("ragged matrix")
        if len(b) != len(A):
            raise ValueError("b must have one entry per row of A")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def m(self) -> int:
        return len(self.A)

    @property
    def n(self) -> int:
        return len(self.A[0])

    @property
    def tA(self):
        return transpose(self.A)

    def residual(self, q):
        """||A q - b||_Z."""
        return ResidualForm(self.A, self.b).raw(q)


def transpose(M):
    return tuple(tuple(col) for col in zip(*M))


def _weight(norm: int, n: int, m: int) -> Power:
    return Power.of(norm, Fraction(n, m)) if norm else Power(0)


# --------------------------------------------------------------------------
# badness profile


def dyadic_schedule(Qmax: int):
    out, Q = [], 1
    while Q <= Qmax:
        out.append(Q)
        Q *= 2
    if out[-1] != Qmax:
        out.append(Qmax)
    return out


@dataclass
class ShellMinimum:
    Q: int
    value: Power  # min over Q/2 < ||q|| <= Q of ||q||^{n/m} ||Aq - b||_Z
    argmin: tuple
    envelope: Power  # min over 0 < ||q|| <= Q


def _shell_min_brute(form, n, m, lo, hi):
    best = None
    for N in range(lo, hi + 1):
        w = _weight(N, n, m)
        for q in signed_shell(n, N):
            v = w * form(q)
            if best is None or v < best[0]:
                best = (v, q)
    return best


def _shell_min_classes(form, n, m, lo, hi):
    L = form.period
    best = None  # (value, N)
    for r in classes(n, L):
        N = class_min_norm_at_least(r, L, lo)
        if N > hi:
            continue
        v = _weight(N, n, m) * form(r)
        if best is None or v < best[0] or (v == best[0] and N < best[1]):
            best = (v, N)
    if best is None:
        return None
    value, N = best
    w = _weight(N, n, m)
    for q in signed_shell(n, N):
        if w * form(q) == value:
            return value, q
    raise AssertionError("residue-class minimum not realised on its shell")


def shell_minimum(pair: AffinePair, lo: int, hi: int, method: str = "auto"):
    """(value, argmin) of ||q||^{n/m}||Aq-b||_Z over lo <= ||q|| <= hi."""
    form = ResidualForm(pair.A, pair.b)
    if method == "auto":
        method = "classes" if use_classes(pair.n, form.period, hi) else "brute"
    if method == "classes":
        return _shell_min_classes(form, pair.n, pair.m, lo, hi)
    return _shell_min_brute(form, pair.n, pair.m, lo, hi)


def badness_profile(pair: AffinePair, Qmax: int, schedule=None, method: str = "auto"):
    """Shell minima over dyadic shells Q/2 < ||q|| <= Q (plus Qmax itself)."""
    if Qmax < 1:
        raise ValueError("Qmax must be >= 1")
    sched = dyadic_schedule(Qmax) if schedule is None else list(schedule)
    out = []
    env = None
    for Q in sched:
        lo = Q // 2 + 1
        value, q = shell_minimum(pair, lo, Q, method)
        env = value if env is None or value < env else env
        out.append(ShellMinimum(Q, value, tuple(q), env))
    return out


@dataclass(frozen=True)
class CounterexampleFound:
    q: tuple
    value: Power


@dataclass(frozen=True)
class NoCounterexampleUpTo:
    Qmax: int
    Qmin: int = 1


def eps_bad_witness(pair: AffinePair, eps, Qmax: int, Qmin: int = 1, method: str = "auto"):
    """First q in signed scan order with ||q||^{n/m}||Aq-b||_Z < eps.

    Only Qmin <= ||q|| <= Qmax is searched; the answer is a finite
    certificate, not a statement about the liminf.
    """
    eps = as_fraction(eps)
    n, m = pair.n, pair.m
    form = ResidualForm(pair.A, pair.b)
    if method == "auto":
        method = "classes" if use_classes(n, form.period, Qmax) else "brute"
    if method == "classes":
        L = form.period
        best_N = None
        for r in classes(n, L):
            N = class_min_norm_at_least(r, L, max(Qmin, 1))
            if N > Qmax or (best_N is not None and N >= best_N):
                continue
            if _weight(N, n, m) * form(r) < eps:
                best_N = N
        if best_N is None:
            return NoCounterexampleUpTo(Qmax, Qmin)
        w = _weight(best_N, n, m)
        for q in signed_shell(n, best_N):
            v = w * form(q)
            if v < eps:
                return CounterexampleFound(tuple(q), v)
        raise AssertionError("residue-class witness not realised")
    for N in range(max(Qmin, 1), Qmax + 1):
        w = _weight(N, n, m)
        for q in signed_shell(n, N):
            v = w * form(q)
            if v < eps:
                return CounterexampleFound(tuple(q), v)
    return NoCounterexampleUpTo(Qmax, Qmin)


# --------------------------------------------------------------------------
# uniform exponent


@dataclass
class ExponentSample:
    X: int
    min_value: object  # exact min of ||Aq||_Z over 0 < ||q|| < X
    argmin: tuple
    w: float  # -log(min)/log X, math.inf when the minimum is 0
    w_tail: float = math.nan  # inf of w over this and later X

    @property
    def zero(self) -> bool:
        return self.min_value == 0


def homogeneous_box_min(A, X: int, method: str = "auto"):
    """(min, argmin) of ||A q||_Z over 0 < ||q|| < X (canonical order)."""
    n = len(A[0])
    form = ResidualForm(A)
    top = math.ceil(X) - 1
    if top < 1:
        raise ValueError("box 0 < ||q|| < X is empty")
    if method == "auto":
        method = "classes" if use_classes(n, form.period, top) else "brute"
    if method == "classes":
        L = form.period
        best = None  # (value, N)
        for r in classes(n, L):
            N = class_min_norm(r, L, nonzero=True)
            if N > top:
                continue
            v = form(r)
            if best is None or v < best[0] or (v == best[0] and N < best[1]):
                best = (v, N)
        value, N = best
        for q in shell(n, N, canonical=True):
            if form(q) == value:
                return value, q
        raise AssertionError("class minimum not realised")
    best = None
    for q in scan(n, top, canonical=True):
        v = form(q)
        if best is None or v < best[0]:
            best = (v, q)
            if v == 0:
                break
    return best


def w_hat_estimate(A, Xschedule, method: str = "auto"):
    """Per-X best exponent w(X) with a running tail infimum (the finite proxy for w-hat)."""
    xs = list(Xschedule)
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise ValueError("schedule must be increasing")
    A = tuple(tuple(_scalar(x) for x in row) for row in A)
    out = []
    for X in xs:
        value, q = homogeneous_box_min(A, X, method)
        w = math.inf if value == 0 else -math.log(float(value)) / math.log(X)
        out.append(ExponentSample(X, value, tuple(q), w))
    tail = math.inf
    for s in reversed(out):
        tail = min(tail, s.w)
        s.w_tail = tail
    return out


# --------------------------------------------------------------------------
# best approximations


class RankDeficient(ValueError):
    """tA Z^m + Z^n has rank below m + n."""


class TooShort(ValueError):
    pass


def subgroup_rank(tA) -> int:
    """Rank over Z of tA Z^m + Z^n, for rational or single-field quadratic entries.

    A family of vectors with entries in Q(sqrt D) is Q-independent iff the
    vectors of (rational parts, surd parts) are, so the rank is computed on
    the split coordinates.
    """
    n = len(tA)
    m = len(tA[0])
    disc = {x.d for row in tA for x in row if isinstance(x, QuadraticNumber) and not x.is_rational}
    if len(disc) > 1:
        raise ValueError("entries from several quadratic fields")

    def split(x):
        if isinstance(x, QuadraticNumber):
            return x.a, x.b
        return as_fraction(x), Fraction(0)

    gens = []
    for j in range(m):
        col = [split(tA[i][j]) for i in range(n)]
        gens.append([c[0] for c in col] + [c[1] for c in col])
    for i in range(n):
        gens.append([Fraction(int(i == k)) for k in range(n)] + [Fraction(0)] * n)
    return rank(gens)


@dataclass(frozen=True)
class BestApprox:
    y: tuple
    Y: int
    M: object


@dataclass
class BestApproxSequence:
    entries: list
    m: int
    n: int
    complete: bool  # False when the scan stopped before Kmax entries

    def __len__(self):
        return len(self.entries)

    @property
    def Y(self):
        return [e.Y for e in self.entries]

    @property
    def M(self):
        return [e.M for e in self.entries]


def best_approx_sequence(tA, Kmax: int, Ymax: int = 10**5, check_rank: bool = True) -> BestApproxSequence:
    """Record minimisers of ||tA y||_Z as ||y|| = 1, 2, 3, ... increases.

    With ``check_rank=False`` rank-deficient (e.g. rational) inputs are
    accepted as surrogates; the scan then stops once the minimum hits 0.
    Ties on a shell keep the lexicographically first canonical vector.
    """
    tA = tuple(tuple(_scalar(x) for x in row) for row in tA)
    n, m = len(tA), len(tA[0])
    if Kmax < 2:
        raise ValueError("Kmax must be >= 2")
    if check_rank and subgroup_rank(tA) < m + n:
        raise RankDeficient("tA Z^m + Z^n does not have rank m + n")
    form = ResidualForm(tA)
    entries: list = []
    best = None
    for N in range(1, Ymax + 1):
        shell_best = None
        for y in shell(m, N, canonical=True):
            v = form(y)
            if shell_best is None or v < shell_best[0]:
                shell_best = (v, y)
        if best is None or shell_best[0] < best:
            best = shell_best[0]
            entries.append(BestApprox(tuple(shell_best[1]), N, best))
            if len(entries) >= Kmax or best == 0:
                break
    return BestApproxSequence(entries, m, n, len(entries) >= Kmax)


def geometric_window(Y, factor: int = 2):
    """Smallest K with Y[k+K] >= factor*Y[k] for every k in range, or None."""
    for K in range(1, len(Y)):
        if all(Y[k + K] >= factor * Y[k] for k in range(len(Y) - K)):
            return K
    return None


# --------------------------------------------------------------------------
# gamma_k, B_alpha and covers


@dataclass
class GammaSequence:
    gammas: dict  # k (1-based, 2 <= k <= K-1) -> Power

    def __getitem__(self, k):
        return self.gammas[k]

    def keys(self):
        return sorted(self.gammas)


def _gamma_term(Y, M, m, n) -> Power:
    if M == 0:
        return Power(0)
    return Power(1, [(Y, Fraction(m, m + n)), (M, Fraction(n, m + n))])


def gamma_sequence(seq: BestApproxSequence, m: int, n: int) -> GammaSequence:
    """gamma_k = max((Y_k^{m/n} M_{k-1})^{n/(m+n)}, (Y_{k+1}^{m/n} M_k)^{n/(m+n)})."""
    e = seq.entries
    if len(e) < 3:
        raise TooShort("need at least three best approximations")
    out = {}
    for k in range(2, len(e)):  # 1-based k; entries[k-1] is y_k
        t1 = _gamma_term(e[k - 1].Y, e[k - 2].M, m, n)
        t2 = _gamma_term(e[k].Y, e[k - 1].M, m, n)
        out[k] = t1 if t1 >= t2 else t2
    return GammaSequence(out)


def _dot_dist(b, y):
    return frac_dist(sum((bi * yi for bi, yi in zip(b, y)), Fraction(0)))


@dataclass
class BAlphaReport:
    per_k: dict  # k -> bool
    k_tail: int
    verdict: bool


def b_alpha_membership(b, seq: BestApproxSequence, gammas: GammaSequence, alpha, k_tail: int = 2) -> BAlphaReport:
    """|b.y_k|_Z > alpha*gamma_k for each k, verdict over k >= k_tail."""
    b = tuple(_scalar(x) for x in b)
    alpha = as_fraction(alpha)
    per_k = {}
    for k in gammas.keys():
        y = seq.entries[k - 1].y
        per_k[k] = Power(_dot_dist(b, y)) > alpha * gammas[k]
    verdict = all(ok for k, ok in per_k.items() if k >= k_tail)
    return BAlphaReport(per_k, k_tail, verdict)


@dataclass
class Cover:
    """Cover of {b in [0,1]^m : |b.y|_Z <= r}.

    m = 1: closed intervals [j/|y| - r/|y|, j/|y| + r/|y|], j = 0..|y|.
    m >= 2: slabs {b : |b.y - j| <= r}.
    """

    y: tuple
    r: object
    full: bool
    centers: list
    half_length: object
    count: int
    radius: object
    C1: Fraction
    C2: Fraction

    def contains(self, point) -> bool:
        if self.full:
            return True
        if len(self.y) == 1:
            import bisect

            x = as_fraction(point[0]) if isinstance(point, (list, tuple)) else as_fraction(point)
            i = bisect.bisect_left(self.centers, x)
            for j in (i - 1, i):
                if 0 <= j < len(self.centers) and Power(abs(x - self.centers[j])) <= self.half_length:
                    return True
            return False
        t = sum((as_fraction(p) * yi for p, yi in zip(point, self.y)), Fraction(0))
        j = round(t)
        return Power(abs(t - j)) <= self.r


def complement_cover(seq: BestApproxSequence, gammas: GammaSequence, alpha, k: int) -> Cover:
    """Explicit cover of the points failing the B_alpha inequality at index k."""
    alpha = as_fraction(alpha)
    y = seq.entries[k - 1].y
    r = alpha * gammas[k]
    m = len(y)
    half = Fraction(1, 2)
    if r >= half:
        return Cover(y, r, True, [], None, 1, Power(half) if m == 1 else None, Fraction(2), alpha)
    if m == 1:
        a = abs(y[0])
        centers = [Fraction(j, a) for j in range(a + 1)]
        hl = r / a
        # a+1 <= 2Y intervals of radius alpha*gamma_k/Y_k: C1 = 2, C2 = alpha
        return Cover(y, r, False, centers, hl, len(centers), hl, Fraction(2), alpha)
    lo = sum(min(0, c) for c in y)
    hi = sum(max(0, c) for c in y)
    centers = list(range(lo, hi + 1))
    return Cover(y, r, False, centers, None, len(centers), None, Fraction(2), alpha)


def cover_escapes(b_fails, cover: Cover, mesh_den: int):
    """Grid points j/mesh_den of [0,1] failing the inequality but outside the cover (m = 1)."""
    escapes = []
    for j in range(mesh_den + 1):
        x = Fraction(j, mesh_den)
        if b_fails(x) and not cover.contains(x):
            escapes.append(x)
    return escapes


@dataclass
class HausdorffSum:
    exponent: Fraction
    exponent_sign: int
    partial_sums: list
    window: Optional[int]
    verdict: str  # "converges" | "diverges" | "undetermined"
    tail_bound: Optional[float]


def hausdorff_exponent(s, delta, m: int, n: int) -> Fraction:
    s, delta = as_fraction(s), as_fraction(delta)
    return m - s - (s - m + 1) * delta * Fraction(n, m + n)


def hausdorff_sum(Y, s, delta, m: int, n: int, Kmax: Optional[int] = None) -> HausdorffSum:
    """Partial sums of sum_{k>=2} Y_k^e, e = m - s - (s-m+1) delta n/(m+n).

    The verdict is certified from the data: for e < 0 a geometric growth
    window Y_{k+K} >= 2 Y_k bounds the tail by a geometric series; for e >= 0
    every term is >= 1. Without a growth window the verdict is undetermined.
    """
    s, delta = as_fraction(s), as_fraction(delta)
    if not (m - 1 <= s <= m) or delta <= 0:
        raise ValueError("need m-1 <= s <= m and delta > 0")
    Y = list(Y)[: Kmax] if Kmax else list(Y)
    e = hausdorff_exponent(s, delta, m, n)
    sign = (e > 0) - (e < 0)
    sums, acc = [], 0.0
    for Yk in Y[1:]:  # k >= 2
        acc += float(Yk) ** float(e)
        sums.append(acc)
    window = geometric_window(Y)
    if sign >= 0:
        verdict, tail = "diverges", None
    elif window is None:
        verdict, tail = "undetermined", None
    else:
        # each block of `window` consecutive terms after the last computed
        # one shrinks by at least 2^e
        last = float(Y[-1]) ** float(e)
        tail = window * last / (1 - 2.0 ** float(e))
        verdict = "converges"
    return HausdorffSum(e, sign, sums, window, verdict, tail)

"""Finite-X detectors for singularity and for the b-twisted Dirichlet systems.

For ``tA`` (n x m), ``b`` (length m), ``eps`` and ``X`` the twisted system is

    ||tA y||_Z < eps |b.y|_Z X^{-m/n}   and   ||y|| < |b.y|_Z X,

over nonzero y in Z^m. Because |b.y|_Z <= 1/2 only 0 < ||y|| <= X/2 can occur,
so every query is a finite scan. Both conditions are symmetric in y -> -y and
witnesses are reported in canonical scan order (increasing norm, then
lexicographic with first nonzero coordinate positive).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .exact import Power
from .kernel import _scalar
from .search import ResidualForm, class_min_norm, classes, joint_period, scan, shell, use_classes


def _matrix(M):
    return tuple(tuple(_scalar(x) for x in row) for row in M)


def _as_power(x) -> Power:
    if isinstance(x, Power):
        return x
    if isinstance(x, int):
        x = Fraction(x)
    return Power(_scalar(x))


@dataclass(frozen=True)
class DIQuery:
    tA: tuple
    b: tuple
    eps: object
    X: object

    def __post_init__(self):
        tA = _matrix(self.tA)
        b = tuple(_scalar(x) for x in self.b)
        if len(b) != len(tA[0]):
            raise ValueError("b must have one entry per column of tA")
        eps, X = _as_power(self.eps), _as_power(self.X)
        if not eps > 0:
            raise ValueError("eps must be positive")
        if not X > 1:
            raise ValueError("X must exceed 1")
        object.__setattr__(self, "tA", tA)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "eps", eps)
        object.__setattr__(self, "X", X)

    @property
    def n(self) -> int:
        return len(self.tA)

    @property
    def m(self) -> int:
        return len(self.tA[0])

    def bound(self) -> Power:
        """eps * X^{-m/n}; a witness needs lhs < bound * scale."""
        return self.eps * self.X ** (-Fraction(self.m, self.n))


@dataclass(frozen=True)
class DIWitness:
    y: tuple
    lhs: object  # ||tA y||_Z
    scale: object  # |b.y|_Z


@dataclass(frozen=True)
class NoWitness:
    searched_up_to: int


def _is_witness(query: DIQuery, bound: Power, lhs, scale, N) -> bool:
    if not scale:
        return False
    return bound * scale > lhs and query.X * scale > N


def di_witness(query: DIQuery, method: str = "auto"):
    """First y with 0 < ||y|| <= floor(X/2) solving the twisted system."""
    m = query.m
    top = math.floor(query.X / 2)
    if top < 1:
        return NoWitness(0)
    bound = query.bound()
    lhs_form = ResidualForm(query.tA)
    scale_form = ResidualForm([query.b])
    L = joint_period(lhs_form, scale_form)
    if method == "auto":
        method = "classes" if use_classes(m, L, top) else "brute"
    out = None
    if method == "classes" and L is not None:
        best_N = None
        for r in classes(m, L):
            N = class_min_norm(r, L, nonzero=True)
            if N > top or (best_N is not None and N >= best_N):
                continue
            if _is_witness(query, bound, lhs_form(r), scale_form(r), N):
                best_N = N
        if best_N is not None:
            for y in shell(m, best_N, canonical=True):
                lhs, scale = lhs_form(y), scale_form(y)
                if _is_witness(query, bound, lhs, scale, best_N):
                    out = DIWitness(tuple(y), lhs, scale)
                    break
            else:
                raise AssertionError("class witness not realised on its shell")
    else:
        # classes of tA alone prune y whose lhs already exceeds bound / 2
        prune = lhs_form.period is not None
        cut = bound / 2
        cut_cache: dict = {}
        for N in range(1, top + 1):
            for y in shell(m, N, canonical=True):
                lhs = lhs_form(y)
                if prune:
                    key = tuple(c % lhs_form.period for c in y)
                    ok = cut_cache.get(key)
                    if ok is None:
                        ok = cut > lhs
                        cut_cache[key] = ok
                    if not ok:
                        continue
                scale = scale_form.raw(y)
                if _is_witness(query, bound, lhs, scale, N):
                    out = DIWitness(tuple(y), lhs, scale)
                    break
            if out is not None:
                break
    if out is None:
        return NoWitness(top)
    assert 2 * max(abs(c) for c in out.y) < query.X
    return out


# --------------------------------------------------------------------------
# verdict grid


@dataclass
class SingProfile:
    eps_schedule: list
    X_schedule: list
    grid: list  # grid[i][j] for eps_schedule[i], X_schedule[j]
    thresholds: list  # X_0 per eps, or None
    min_tail: int = 2

    @property
    def consistent(self) -> bool:
        """Every eps has a witness on a tail of at least ``min_tail`` X values."""
        return all(t is not None for t in self.thresholds)

    def verdict_rows(self):
        for eps, row in zip(self.eps_schedule, self.grid):
            yield eps, [w.y if isinstance(w, DIWitness) else None for w in row]


def _threshold(row, X_schedule, min_tail):
    j = len(row)
    while j > 0 and isinstance(row[j - 1], DIWitness):
        j -= 1
    if len(row) - j < min_tail:
        return None
    return X_schedule[j]


def sing_for_b_profile(tA, b, eps_schedule, X_schedule, min_tail: int = 2, method: str = "auto") -> SingProfile:
    """Witness grid over (eps, X) with the tail threshold per eps.

    "For all sufficiently large X" becomes "for every X of the schedule from
    the reported threshold on"; the schedule is part of the result.
    """
    eps_schedule = list(eps_schedule)
    X_schedule = list(X_schedule)
    if not eps_schedule or not X_schedule:
        raise ValueError("schedules must be nonempty")
    grid = []
    for eps in eps_schedule:
        grid.append([di_witness(DIQuery(tA, b, eps, X), method) for X in X_schedule])
    thr = [_threshold(row, X_schedule, min_tail) for row in grid]
    return SingProfile(eps_schedule, X_schedule, grid, thr, min_tail)


# --------------------------------------------------------------------------
# classical singularity


@dataclass(frozen=True)
class ClassicalWitness:
    q: tuple
    value: object  # ||A q||_Z


def classical_singular_witness(A, eps, X, method: str = "auto"):
    """First q (canonical order) with ||Aq||_Z < eps X^{-n/m}, 0 < ||q|| < X."""
    A = _matrix(A)
    m, n = len(A), len(A[0])
    eps, X = _as_power(eps), _as_power(X)
    bound = eps * X ** (-Fraction(n, m))
    top = math.ceil(X) - 1
    if top < 1:
        return NoWitness(0)
    form = ResidualForm(A)
    if method == "auto":
        method = "classes" if use_classes(n, form.period, top) else "brute"
    if method == "classes":
        L = form.period
        best_N = None
        for r in classes(n, L):
            N = class_min_norm(r, L, nonzero=True)
            if N > top or (best_N is not None and N >= best_N):
                continue
            if bound > form(r):
                best_N = N
        if best_N is None:
            return NoWitness(top)
        for q in shell(n, best_N, canonical=True):
            v = form(q)
            if bound > v:
                return ClassicalWitness(tuple(q), v)
        raise AssertionError("class witness not realised")
    for q in scan(n, top, canonical=True):
        v = form(q)
        if bound > v:
            return ClassicalWitness(tuple(q), v)
    return NoWitness(top)


@dataclass
class RemarkCheck:
    vacuous: bool
    y: Optional[tuple] = None
    tA_witness: Optional[ClassicalWitness] = None
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.vacuous or all(self.checks.values())


def remark_implication_check(query: DIQuery, witness=None) -> RemarkCheck:
    """A twisted witness is a classical singularity witness for tA (same eps, X).

    ``witness`` defaults to the output of :func:`di_witness`; synthetic
    witnesses are accepted so boundary cases can be exercised directly.
    """
    if witness is None:
        witness = di_witness(query)
    if isinstance(witness, NoWitness):
        return RemarkCheck(vacuous=True)
    y = witness.y
    N = max(abs(c) for c in y)
    bound = query.bound()
    half = Fraction(1, 2)
    checks = {
        "scale<=1/2": witness.scale <= half,
        "lhs<eps*scale*X^(-m/n)": bound * witness.scale > witness.lhs,
        "lhs<eps*X^(-m/n)/2": bound * half > witness.lhs,
        "lhs<eps*X^(-m/n)": bound > witness.lhs,
        "|y|<X/2": query.X * half > N,
        "|y|<X": query.X > N,
    }
    tw = classical_singular_witness(query.tA, query.eps, query.X)
    checks["classical witness exists"] = isinstance(tw, ClassicalWitness)
    return RemarkCheck(False, tuple(y), tw if isinstance(tw, ClassicalWitness) else None, checks)

"""Finite-range checks of the inhomogeneous/homogeneous transference inequalities.

Notation: A is m x n, b in R^m, q in Z^n, y in Z^m, sup norms throughout.

* inhomogeneous system:  ||Aq - b||_Z <= C,  ||q|| <= X;
* homogeneous condition: |b.y|_Z <= gamma * max(X ||tA y||_Z, C ||y||)  for all y.

With gamma = m + n the condition is necessary for the system; with
gamma = 2^{m-1} ((m+n)!)^{-2} it is sufficient. Since |b.y|_Z <= 1/2 the
condition can only fail for ||y|| < 1/(2 gamma C), which makes both
directions finite scans.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .exact import Power, as_fraction
from .kernel import AffinePair, _scalar, transpose
from .search import (
    ResidualForm,
    class_min_norm,
    classes,
    joint_period,
    scan,
    shell,
    use_classes,
)
from .singular import DIQuery, DIWitness, NoWitness, di_witness


class InternalInconsistency(AssertionError):
    """A guaranteed object was not found: an implementation bug, not a verdict."""


class DomainError(ValueError):
    pass


class PremiseUnsatisfied(ValueError):
    pass


def _power(x) -> Power:
    if isinstance(x, Power):
        return x
    if isinstance(x, int):
        x = Fraction(x)
    return Power(_scalar(x))


# --------------------------------------------------------------------------
# constants


@dataclass(frozen=True)
class TransferConstants:
    m: int
    n: int
    gamma_nec: Fraction
    gamma_suf: Fraction
    c1: Power
    c2: Power


def transfer_constants(m: int, n: int) -> TransferConstants:
    if m < 1 or n < 1:
        raise ValueError("m, n must be positive")
    g_nec = Fraction(m + n)
    g_suf = Fraction(2 ** (m - 1), math.factorial(m + n) ** 2)
    e = -1 - Fraction(m, n)
    return TransferConstants(m, n, g_nec, g_suf, Power.of(g_nec, e), Power.of(g_suf, e))


# --------------------------------------------------------------------------
# scans


def inhomogeneous_solution(A, b, C, X, method: str = "auto"):
    """First q with ||Aq - b||_Z <= C and ||q|| <= X, or None.

    Scan order is by norm (q = 0 first), then signed shell order for the
    brute route; the class route returns the minimal-norm representative of
    the first admissible class found at the smallest norm.
    """
    C, X = _power(C), _power(X)
    form = ResidualForm(A, b)
    n = form.cols
    top = math.floor(X)
    if top < 0:
        return None
    if method == "auto":
        method = "classes" if use_classes(n, form.period, top) else "brute"
    if method == "classes" and form.period is not None:
        L = form.period
        best = None
        for r in classes(n, L):
            N = class_min_norm(r, L)
            if N > top or (best is not None and N >= best):
                continue
            if C >= form(r):
                best = N
        if best is None:
            return None
        for q in shell(n, best):
            if C >= form(q):
                return tuple(q)
        raise InternalInconsistency("class solution not realised")
    for q in scan(n, top, min_norm=0):
        if C >= form(q):
            return tuple(q)
    return None


def y_box_bound(gamma, C) -> Power:
    """Condition can only fail for ||y|| < 1/(2 gamma C)."""
    return 1 / (2 * _power(gamma) * _power(C))


def _violators(A, b, gamma, C, X, method="auto"):
    """Yield y (canonical order) with |b.y|_Z > gamma max(X||tA y||_Z, C||y||)."""
    tA = transpose(A)
    gamma, C, X = _power(gamma), _power(C), _power(X)
    lhs = ResidualForm([b])
    hom = ResidualForm(tA)
    m = hom.cols
    ybound = y_box_bound(gamma, C)
    top = math.ceil(ybound) - 1  # ||y|| < ybound

    def violates(v_b, v_t, N):
        return v_b > gamma * max(X * v_t, C * N)

    if top < 1:
        return
    L = joint_period(lhs, hom)
    if method == "auto":
        method = "classes" if use_classes(m, L, top) else "brute"
    if method == "classes" and L is not None:
        bad = []
        for r in classes(m, L):
            N = class_min_norm(r, L, nonzero=True)
            if N <= top and violates(lhs(r), hom(r), N):
                bad.append(N)
        if not bad:
            return
        # violators exist; list them in scan order from the smallest norm
        for N in range(min(bad), top + 1):
            for y in shell(m, N, canonical=True):
                if violates(lhs(y), hom(y), N):
                    yield tuple(y)
        return
    for N in range(1, top + 1):
        for y in shell(m, N, canonical=True):
            if violates(lhs.raw(y), hom(y), N):
                yield tuple(y)


def first_violator(A, b, gamma, C, X, method: str = "auto"):
    return next(_violators(A, b, gamma, C, X, method), None)


# --------------------------------------------------------------------------
# the two directions


@dataclass(frozen=True)
class HomogeneousWitnessViolated:
    y: tuple
    q: tuple


@dataclass(frozen=True)
class AllYPass:
    q: tuple
    y_bound: Power


@dataclass(frozen=True)
class PremiseVacuous:
    """No q solves the inhomogeneous system, so nothing is asserted."""

    y_bound: Power


@dataclass(frozen=True)
class InhomogeneousSolution:
    q: tuple
    y_bound: Power


@dataclass(frozen=True)
class HypothesisFailed:
    y: tuple


def _pair(A, b):
    p = AffinePair(A, b)
    return p.A, p.b


def check_necessary(A, b, C, X, method: str = "auto"):
    """If the system has a solution, no y may violate the gamma = m+n condition."""
    A, b = _pair(A, b)
    C, X = _power(C), _power(X)
    if not C > 0 or not X > 1:
        raise DomainError("need C > 0 and X > 1")
    m, n = len(A), len(A[0])
    gamma = Fraction(m + n)
    q = inhomogeneous_solution(A, b, C, X, method)
    yb = y_box_bound(gamma, C)
    if q is None:
        return PremiseVacuous(yb)
    y = first_violator(A, b, gamma, C, X, method)
    if y is not None:
        return HomogeneousWitnessViolated(y, q)
    return AllYPass(q, yb)


def check_sufficient(A, b, C, X, method: str = "auto"):
    """If no y violates the small-gamma condition, a solution q must exist."""
    A, b = _pair(A, b)
    C, X = _power(C), _power(X)
    if not C > 0 or not X > 1:
        raise DomainError("need C > 0 and X > 1")
    m, n = len(A), len(A[0])
    gamma = transfer_constants(m, n).gamma_suf
    y = first_violator(A, b, gamma, C, X, method)
    if y is not None:
        return HypothesisFailed(y)
    q = inhomogeneous_solution(A, b, C, X, method)
    if q is None:
        raise InternalInconsistency(f"hypothesis holds on ||y|| < {y_box_bound(gamma, C)} but no q found")
    return InhomogeneousSolution(q, y_box_bound(gamma, C))


# --------------------------------------------------------------------------
# sandwich between twisted Dirichlet improvability and badness


@dataclass
class SandwichRow:
    direction: str  # "nec" or "suf"
    scale: object  # X for "nec", T for "suf"
    mapped: Power  # T for "nec", X for "suf"
    premise: bool
    witness: Optional[tuple]
    ok: bool
    detail: str = ""


@dataclass
class SandwichReport:
    m: int
    n: int
    eps: Fraction
    constants: TransferConstants
    rows: list = field(default_factory=list)

    @property
    def violations(self):
        return [r for r in self.rows if not r.ok]

    @property
    def ok(self) -> bool:
        return not self.violations


def sandwich_check(A, b, eps, Xschedule, Tschedule, method: str = "auto") -> SandwichReport:
    """Check both inclusions at each scale of the two schedules.

    nec: a twisted witness at level c1 eps^{m/n} and scale X forbids any q with
    ||q|| <= T = (g X / eps)^{m/n} and ||Aq - b||_Z <= 1/(g X), g = m+n.

    suf: if no q has ||q|| <= T and ||Aq - b||_Z <= eps^{-1} T^{-n/m}, a twisted
    witness exists at level c2 eps^{m/n} and scale X = eps T^{n/m} / g', g' small.
    """
    A, b = _pair(A, b)
    tA = transpose(A)
    m, n = len(A), len(A[0])
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    k = transfer_constants(m, n)
    rep = SandwichReport(m, n, eps, k)
    r = Fraction(m, n)
    for X in Xschedule:
        Xp = _power(X)
        lvl = k.c1 * Power.of(eps, r)
        w = di_witness(DIQuery(tA, b, lvl, Xp), method)
        if isinstance(w, NoWitness):
            rep.rows.append(SandwichRow("nec", X, Power(0), False, None, True, "no twisted witness"))
            continue
        T = (k.gamma_nec * Xp / eps) ** r
        C = 1 / (k.gamma_nec * Xp)
        q = inhomogeneous_solution(A, b, C, T, method)
        ok = q is None
        detail = "no q in mapped box" if ok else f"q={q} solves the system"
        rep.rows.append(SandwichRow("nec", X, T, True, w.y, ok, detail))
    for T in Tschedule:
        Tp = _power(T)
        C = (1 / _power(eps)) * Tp ** (-Fraction(n, m))
        q = inhomogeneous_solution(A, b, C, Tp, method)
        if q is not None:
            rep.rows.append(SandwichRow("suf", T, Power(0), False, q, True, "badness fails at T"))
            continue
        Xm = eps * Tp ** Fraction(n, m) / k.gamma_suf
        lvl = k.c2 * Power.of(eps, r)
        if not Xm > 1:
            rep.rows.append(SandwichRow("suf", T, Xm, False, None, True, "mapped X <= 1"))
            continue
        w = di_witness(DIQuery(tA, b, lvl, Xm), method)
        ok = isinstance(w, DIWitness)
        rep.rows.append(SandwichRow("suf", T, Xm, True, w.y if ok else None, ok,
                                    "twisted witness found" if ok else "no twisted witness"))
    return rep


# --------------------------------------------------------------------------
# homogeneous transfer between A and tA


def transfer_DU(m: int, n: int, C, X):
    """(D, U) with D = (m+n-1) X^{(1-m)/(m+n-1)} C^{m/(m+n-1)}, U = (m+n-1) X^{n/(m+n-1)} C^{(1-n)/(m+n-1)}."""
    C, X = _power(C), _power(X)
    if not (C > 0 and Power(1) > C):
        raise DomainError("need 0 < C < 1")
    if X < 1:
        raise DomainError("need X >= 1")
    s = m + n - 1
    D = s * X ** Fraction(1 - m, s) * C ** Fraction(m, s)
    U = s * X ** Fraction(n, s) * C ** Fraction(1 - n, s)
    return D, U


def homogeneous_solution(M, C, X, strict: bool = False, method: str = "auto"):
    """First q (canonical order) with ||Mq||_Z <= C (or < C) and 0 < ||q|| <= X."""
    C, X = _power(C), _power(X)
    form = ResidualForm(M)
    n = form.cols
    top = math.floor(X)
    if top < 1:
        return None

    def good(v):
        return C > v if strict else C >= v

    if method == "auto":
        method = "classes" if use_classes(n, form.period, top) else "brute"
    if method == "classes" and form.period is not None:
        L = form.period
        best = None
        for r in classes(n, L):
            N = class_min_norm(r, L, nonzero=True)
            if N > top or (best is not None and N >= best):
                continue
            if good(form(r)):
                best = N
        if best is None:
            return None
        for q in shell(n, best, canonical=True):
            if good(form(q)):
                return tuple(q)
        raise InternalInconsistency("class solution not realised")
    for q in scan(n, top, canonical=True):
        if good(form(q)):
            return tuple(q)
    return None


@dataclass(frozen=True)
class SingularTransfer:
    q: tuple
    y: tuple
    D: Power
    U: Power


def check_singular_transfer(A, C, X, method: str = "auto") -> SingularTransfer:
    """q with ||Aq||_Z <= C, 0 < ||q|| <= X  =>  y with ||tA y||_Z <= D, 0 < ||y|| <= U."""
    A = AffinePair(A, [0] * len(A)).A
    m, n = len(A), len(A[0])
    D, U = transfer_DU(m, n, C, X)
    q = homogeneous_solution(A, C, X, method=method)
    if q is None:
        raise PremiseUnsatisfied("no q with ||Aq||_Z <= C and 0 < ||q|| <= X")
    y = homogeneous_solution(transpose(A), D, U, method=method)
    if y is None:
        raise InternalInconsistency(f"q={q} exists but no y within D={D}, U={U}")
    return SingularTransfer(q, y, D, U)


def very_singular_exponents(m: int, n: int, delta):
    """Exponents of X in the transferred bounds, and the supremum of admissible delta'.

    Returns (x_exp_D, y_exp, delta_sup) where D = (m+n-1) X^{x_exp_D},
    Y = (m+n) X^{y_exp}, and any delta' < delta_sup works for large X.
    """
    delta = as_fraction(delta)
    s = m + n - 1
    x_exp_D = Fraction(1 - m, s) + (-Fraction(n, m) - delta) * Fraction(m, s)
    y_exp = Fraction(n, m) + delta * Fraction(n - 1, s)
    gain = delta * Fraction(m, n * s)
    return x_exp_D, y_exp, gain / y_exp


@dataclass
class VerySingularRow:
    X: int
    q: Optional[tuple]
    y: Optional[tuple] = None
    D: Optional[Power] = None
    Y: Optional[Power] = None
    y_holds: Optional[bool] = None  # ||tA y|| < Y^{-n'/m'-delta'} and ||y|| < Y at delta'_check


@dataclass
class VerySingularReport:
    m: int
    n: int
    delta: Fraction
    x_exp_D: Fraction
    y_exp: Fraction
    delta_sup: Fraction
    delta_check: Fraction
    rows: list = field(default_factory=list)


def very_singular_check(A, delta, Xschedule, method: str = "auto") -> VerySingularReport:
    """Per X: a q with ||Aq||_Z < X^{-n/m-delta}, 0 < ||q|| < X, and its transferred y."""
    A = AffinePair(A, [0] * len(A)).A
    m, n = len(A), len(A[0])
    delta = as_fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    x_exp_D, y_exp, dsup = very_singular_exponents(m, n, delta)
    dchk = dsup / 2
    rep = VerySingularReport(m, n, delta, x_exp_D, y_exp, dsup, dchk)
    tA = transpose(A)
    hom_t = ResidualForm(tA)
    for X in Xschedule:
        Xp = _power(X)
        C = Xp ** (-Fraction(n, m) - delta)
        # 0 < ||q|| < X is ||q|| <= ceil(X) - 1
        q = homogeneous_solution(A, C, Power(math.ceil(Xp) - 1), strict=True, method=method)
        if q is None:
            rep.rows.append(VerySingularRow(X, None))
            continue
        D, U = transfer_DU(m, n, C, Xp)
        if D != (m + n - 1) * Xp ** x_exp_D:
            raise InternalInconsistency("D disagrees with its closed-form exponent")
        y = homogeneous_solution(tA, D, U, method=method)
        if y is None:
            raise InternalInconsistency(f"X={X}: q={q} but no transferred y")
        Y = (m + n) * Xp ** y_exp
        N = max(abs(c) for c in y)
        holds = Y ** (-Fraction(m, n) - dchk) > hom_t(y) and Y > N
        rep.rows.append(VerySingularRow(X, q, y, D, Y, holds))
    return rep

"""Deterministic scans over integer vectors and residue-class shortcuts.

Scan order: increasing sup norm; inside a shell, "canonical" scans keep one
vector of each pair {y, -y} (first nonzero coordinate > 0) in lexicographic
order, which is enough for conditions symmetric under y -> -y. Signed scans
(used when the condition is not symmetric, e.g. ||Aq - b||_Z) visit the
canonical half first and then the negated vectors in the same order.

For rational data the functions y -> ||M y - s||_Z are periodic in y modulo
the common denominator L of M. Existence questions over large boxes then
reduce to a scan over the L^k residue classes, each represented by a
vector of minimal sup norm. The brute-force scans stay available and the
test-suite checks that both routes agree.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .exact import frac_dist, is_rational_scalar, to_rational


def sup_norm(v) -> int:
    return max((abs(x) for x in v), default=0)


def box(k: int, N: int):
    """All integer vectors of length k with sup norm <= N, lexicographic."""
    return itertools.product(range(-N, N + 1), repeat=k)


def shell(k: int, N: int, canonical: bool = False):
    """Integer vectors with sup norm exactly N in lexicographic order."""
    if N == 0:
        if not canonical:
            yield (0,) * k
        return
    if k == 1:
        if not canonical:
            yield (-N,)
        yield (N,)
        return
    for x0 in range(-N, N + 1):
        if canonical and x0 < 0:
            continue
        if abs(x0) == N:
            for rest in itertools.product(range(-N, N + 1), repeat=k - 1):
                yield (x0,) + rest
        else:
            for rest in shell(k - 1, N, canonical=canonical and x0 == 0):
                yield (x0,) + rest


def signed_shell(k: int, N: int):
    """Shell of norm N: the canonical half first, then the negatives in the same order."""
    half = list(shell(k, N, canonical=True))
    yield from half
    for y in half:
        yield tuple(-c for c in y)


def scan(k: int, max_norm: int, min_norm: int = 1, canonical: bool = False):
    for N in range(min_norm, max_norm + 1):
        yield from shell(k, N, canonical)


def first_match(k: int, predicate, max_norm: int, min_norm: int = 1, canonical: bool = False):
    for y in scan(k, max_norm, min_norm, canonical):
        if predicate(y):
            return tuple(y)
    return None


# --------------------------------------------------------------------------
# exact linear forms with residue caching


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


class ResidualForm:
    """y -> || M y - shift ||_Z in the sup norm, for exact M (list of rows).

    M may hold rationals or quadratic surds. For rational M the value only
    depends on y modulo ``period`` and results are memoised per class.
    """

    def __init__(self, M, shift=None):
        self.M = [tuple(row) for row in M]
        self.rows = len(self.M)
        self.cols = len(self.M[0])
        self.shift = tuple(shift) if shift is not None else (Fraction(0),) * self.rows
        self.rational = all(is_rational_scalar(x) for row in self.M for x in row)
        self.shift_rational = all(is_rational_scalar(x) for x in self.shift)
        if self.rational:
            per = 1
            for row in self.M:
                for x in row:
                    per = _lcm(per, to_rational(x).denominator)
            self.period = per
            self.M = [tuple(to_rational(x) for x in row) for row in self.M]
        else:
            self.period = None
        self._cache: dict = {}

    def raw(self, y):
        out = None
        for row, s in zip(self.M, self.shift):
            v = frac_dist(sum((a * c for a, c in zip(row, y)), Fraction(0)) - s)
            if out is None or v > out:
                out = v
        return out

    def __call__(self, y):
        if self.period is None:
            return self.raw(y)
        key = tuple(c % self.period for c in y)
        v = self._cache.get(key)
        if v is None:
            v = self.raw(key)
            self._cache[key] = v
        return v

    def values_vector(self, y):
        """The vector M y - shift (not reduced)."""
        return tuple(sum((a * c for a, c in zip(row, y)), Fraction(0)) - s for row, s in zip(self.M, self.shift))


def joint_period(*forms):
    """Common period of several forms on the same variables, or None."""
    per = 1
    for f in forms:
        if f.period is None:
            return None
        per = _lcm(per, f.period)
    return per


def classes(k: int, L: int):
    return itertools.product(range(L), repeat=k)


def class_min_norm(r, L: int, nonzero: bool = False) -> int:
    """Smallest sup norm of an integer vector congruent to r modulo L."""
    n = max((min(x, L - x) if x else 0 for x in r), default=0)
    if n == 0 and nonzero:
        return L
    return n


def _coord_min_at_least(x: int, L: int, N0: int) -> int:
    """Smallest |v| >= N0 with v = x (mod L)."""
    a = x % L
    best = None
    for res in (a, (-a) % L):
        # smallest v >= N0 with v = res (mod L)
        v = res + L * max(0, -(-(N0 - res) // L))
        if best is None or v < best:
            best = v
    return best


def class_min_norm_at_least(r, L: int, N0: int) -> int:
    """Smallest sup norm >= N0 among vectors congruent to r modulo L."""
    base = [min(x, L - x) if x else 0 for x in r]
    if max(base, default=0) >= N0:
        return max(base)
    best = None
    for j in range(len(r)):
        cand = max([_coord_min_at_least(r[j], L, N0)] + [base[i] for i in range(len(r)) if i != j])
        if best is None or cand < best:
            best = cand
    return best


def use_classes(k: int, period, max_norm) -> bool:
    """Whether a residue-class scan is cheaper than a box scan."""
    if period is None:
        return False
    n_classes = period ** k
    n_box = (2 * max_norm + 1) ** k
    return n_classes <= 250_000 and n_classes < n_box

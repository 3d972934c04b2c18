"""Independent naive oracles: full coefficient-box enumeration, continued fractions.

Nothing here imports the package's enumeration code; only plain Fraction
arithmetic is used, so agreement is a genuine second route.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction


def _inv(B):
    n = len(B)
    M = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(B)]
    for c in range(n):
        p = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [x / piv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return [row[n:] for row in M]


def _norm(v, norm):
    if norm == "sup":
        return max(abs(x) for x in v)
    return sum(x * x for x in v)


def _sup_bound(value, norm) -> Fraction:
    """Upper bound on the sup norm of any vector whose `norm` value is <= value."""
    if norm == "sup":
        return Fraction(value)
    value = Fraction(value)
    r = math.isqrt(math.ceil(value)) + 1
    return Fraction(r)


def _rank(vs):
    M = [list(v) for v in vs]
    rk = 0
    cols = len(M[0]) if M else 0
    for c in range(cols):
        p = next((r for r in range(rk, len(M)) if M[r][c] != 0), None)
        if p is None:
            continue
        M[rk], M[p] = M[p], M[rk]
        for r in range(len(M)):
            if r != rk and M[r][c] != 0:
                f = M[r][c] / M[rk][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[rk])]
        rk += 1
    return rk


def _dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def reduce_basis(B):
    """Textbook LLL (delta = 3/4) on rows; a fresh implementation used only to shrink boxes."""
    B = [list(r) for r in B]
    n = len(B)

    def gso(B):
        Bs, mu = [], [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            v = list(B[i])
            for j in range(i):
                mu[i][j] = _dot(B[i], Bs[j]) / _dot(Bs[j], Bs[j])
                v = [a - mu[i][j] * b for a, b in zip(v, Bs[j])]
            Bs.append(v)
        return Bs, mu

    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            _, mu = gso(B)
            r = round(mu[k][j])
            if r:
                B[k] = [a - r * b for a, b in zip(B[k], B[j])]
        Bs, mu = gso(B)
        if _dot(Bs[k], Bs[k]) >= (Fraction(3, 4) - mu[k][k - 1] ** 2) * _dot(Bs[k - 1], Bs[k - 1]):
            k += 1
        else:
            B[k], B[k - 1] = B[k - 1], B[k]
            k = max(k - 1, 1)
    return B


def _box(B, R):
    """All integer coefficient vectors c with |cB|_sup <= R possible."""
    Bi = _inv(B)
    n = len(B)
    lim = [math.floor(R * sum(abs(Bi[j][i]) for j in range(n))) for i in range(n)]
    return itertools.product(*[range(-k, k + 1) for k in lim])


def _combo(c, B):
    return tuple(sum((ci * Fraction(B[i][j]) for i, ci in enumerate(c)), Fraction(0)) for j in range(len(B[0])))


def naive_successive_minima(B, norm="sup"):
    B = reduce_basis([[Fraction(x) for x in row] for row in B])
    R = _sup_bound(max(_norm(r, norm) for r in B), norm)
    vecs = [_combo(c, B) for c in _box(B, R) if any(c)]
    vecs.sort(key=lambda v: _norm(v, norm))
    out, chosen = [], []
    for v in vecs:
        if _rank(chosen + [v]) > len(chosen):
            chosen.append(v)
            out.append(_norm(v, norm))
            if len(chosen) == len(B):
                break
    return out


def naive_shortest_grid_vector(B, shift, norm="sup"):
    B = reduce_basis([[Fraction(x) for x in row] for row in B])
    shift = [Fraction(x) for x in shift]
    # the grid L + shift is unchanged by moving shift by lattice vectors
    coords = [sum((shift[j] * c for j, c in enumerate(col)), Fraction(0)) for col in zip(*_inv(B))]
    lattice_part = _combo([round(c) for c in coords], B)
    shift = [a - b for a, b in zip(shift, lattice_part)]
    R = 2 * _sup_bound(_norm(shift, norm), norm)
    best = _norm(shift, norm)
    for c in _box(B, R):
        w = [a + s for a, s in zip(_combo(c, B), shift)]
        best = min(best, _norm(w, norm))
    return best


def naive_lambda1_perp_sq(p, q, alpha):
    """min nonzero |pi(v)|^2 over v in Z^n + Z p/q, pi the projection orthogonal to alpha."""
    n = len(p)
    alpha = [Fraction(a) for a in alpha]
    na = sum(a * a for a in alpha)

    def proj(v):
        t = sum(a * b for a, b in zip(v, alpha)) / na
        return [a - t * b for a, b in zip(v, alpha)]

    # pi(e_i) for a coordinate axis not parallel to alpha bounds the minimum
    R2 = min(s for s in (sum(x * x for x in proj([Fraction(int(i == j)) for j in range(n)])) for i in range(n)) if s > 0)
    R = math.isqrt(math.ceil(R2)) + 1 + math.isqrt(math.ceil(na)) + 1
    best = R2
    for j in range(q):
        base = [Fraction(j * pi, q) for pi in p]
        for k in itertools.product(range(-R - 1, R + 2), repeat=n):
            v = [b + ki for b, ki in zip(base, k)]
            if max(abs(x) for x in v) > R:
                continue
            s = sum(x * x for x in proj(v))
            if 0 < s < best:
                best = s
    return best


def continued_fraction(x: Fraction):
    out = []
    while True:
        a = math.floor(x)
        out.append(a)
        x -= a
        if x == 0:
            return out
        x = 1 / x


def convergent_denominators(x: Fraction):
    qs = []
    q0, q1 = 1, 0  # q_{-2}, q_{-1}
    for a in continued_fraction(x):
        q0, q1 = q1, a * q1 + q0
        qs.append(q1)
    return qs


def naive_inhomogeneous_exists(A, b, C, X):
    """Brute check: some q with ||q|| <= X and ||Aq - b||_Z <= C."""
    m, n = len(A), len(A[0])
    X = math.floor(X)
    for q in itertools.product(range(-X, X + 1), repeat=n):
        vals = []
        for i in range(m):
            v = sum((Fraction(A[i][j]) * q[j] for j in range(n)), Fraction(0)) - Fraction(b[i])
            vals.append(abs(v - round(v)))
        if max(vals) <= C:
            return True
    return False

"""Exact lattice geometry in small dimension.

Lattices are given by row vectors with rational entries. Reduction (LLL) is
done in exact rational arithmetic and is only used to make enumeration
cheap; correctness of every minimum comes from Fincke-Pohst enumeration with
exact Gram-Schmidt data, which visits every coefficient vector inside the
requested ball.

Euclidean quantities are returned squared. Sup-norm quantities are returned
as they are.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

from .exact import Power, as_fraction

MAX_ENUM_DIM = 4


class ResourceError(RuntimeError):
    """An enumeration would exceed a configured cap."""


class DimensionTooLarge(ResourceError):
    pass


def _check_dim(d: int, cap: int | None = None):
    cap = MAX_ENUM_DIM if cap is None else cap
    if d > cap:
        raise DimensionTooLarge(f"dimension {d} exceeds enumeration cap {cap}")


# --------------------------------------------------------------------------
# small exact linear algebra


def dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vscale(c, u):
    return tuple(c * a for a in u)


def combo(coeffs, rows):
    """sum_i coeffs[i] * rows[i]."""
    d = len(rows[0])
    out = [Fraction(0)] * d
    for c, r in zip(coeffs, rows):
        if c:
            for j in range(d):
                out[j] += c * r[j]
    return tuple(out)


def norm_value(v, norm: str):
    if norm == "sup":
        return max((abs(a) for a in v), default=Fraction(0))
    if norm == "euclidean":
        return dot(v, v)
    raise ValueError(f"unknown norm {norm!r}")


def det(M) -> Fraction:
    M = [[as_fraction(x) for x in row] for row in M]
    n = len(M)
    if any(len(r) != n for r in M):
        raise ValueError("determinant of a non-square matrix")
    sign, out = 1, Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            sign = -sign
        out *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            if f:
                for k in range(c, n):
                    M[r][k] -= f * M[c][k]
    return sign * out


def inverse(M):
    n = len(M)
    aug = [[as_fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        aug[c] = [x / p for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[c])]
    return [tuple(row[n:]) for row in aug]


def transpose(M):
    return [tuple(col) for col in zip(*M)]


def matmul(A, B):
    Bt = transpose(B)
    return [tuple(dot(r, c) for c in Bt) for r in A]


def rank(vectors) -> int:
    rows = [[as_fraction(x) for x in v] for v in vectors]
    if not rows:
        return 0
    r, ncols = 0, len(rows[0])
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(r + 1, len(rows)):
            f = rows[i][c] / rows[r][c]
            if f:
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def gram_schmidt(vectors):
    """Exact Gram-Schmidt data: (bstar, |bstar_i|^2, mu) for independent rows."""
    bstar, bsq, mu = [], [], []
    for i, b in enumerate(vectors):
        row = []
        v = tuple(b)
        for j in range(i):
            m = dot(b, bstar[j]) / bsq[j]
            row.append(m)
            if m:
                v = vsub(v, vscale(m, bstar[j]))
        nsq = dot(v, v)
        if nsq == 0:
            raise ValueError("vectors are linearly dependent")
        bstar.append(v)
        bsq.append(nsq)
        mu.append(row)
    return bstar, bsq, mu


# --------------------------------------------------------------------------
# LLL and enumeration


def lll_reduce(vectors, delta=Fraction(3, 4)):
    """Exact LLL. Returns (reduced rows, integer transform U) with reduced = U @ vectors."""
    b = [tuple(as_fraction(x) for x in v) for v in vectors]
    k = len(b)
    U = [[int(i == j) for j in range(k)] for i in range(k)]
    if k <= 1:
        return b, U
    _, bsq, mu = gram_schmidt(b)
    i = 1
    while i < k:
        for j in range(i - 1, -1, -1):
            q = round(mu[i][j])
            if q:
                b[i] = vsub(b[i], vscale(q, b[j]))
                U[i] = [x - q * y for x, y in zip(U[i], U[j])]
                for l in range(j):
                    mu[i][l] -= q * mu[j][l]
                mu[i][j] -= q
        if bsq[i] >= (delta - mu[i][i - 1] ** 2) * bsq[i - 1]:
            i += 1
        else:
            b[i], b[i - 1] = b[i - 1], b[i]
            U[i], U[i - 1] = U[i - 1], U[i]
            _, bsq, mu = gram_schmidt(b)
            i = max(i - 1, 1)
    return b, U


def enumerate_ball(vectors, radius_sq, center=None) -> Iterator[tuple[tuple[int, ...], tuple, Fraction]]:
    """All lattice points v with |v - center|^2 <= radius_sq.

    ``vectors`` must be linearly independent rows (any rank). Yields
    (coefficients, v, |v - center|^2). The input basis is used as given, so
    callers normally pass an LLL-reduced basis.
    """
    rows = [tuple(as_fraction(x) for x in v) for v in vectors]
    r = len(rows)
    dim = len(rows[0])
    radius_sq = as_fraction(radius_sq)
    t = tuple(Fraction(0) for _ in range(dim)) if center is None else tuple(as_fraction(x) for x in center)
    bstar, bsq, mu = gram_schmidt(rows)
    tau = [dot(t, bstar[j]) / bsq[j] for j in range(r)]
    residual = dot(t, t) - sum((tau[j] ** 2 * bsq[j] for j in range(r)), Fraction(0))
    budget0 = radius_sq - residual
    if budget0 < 0:
        return
    coeffs = [0] * r

    def rec(j, budget):
        cj = tau[j] - sum((coeffs[i] * mu[i][j] for i in range(j + 1, r)), Fraction(0))
        base = math.floor(cj)
        for direction in (0, 1):
            c = base if direction == 0 else base + 1
            step = -1 if direction == 0 else 1
            while True:
                diff = c - cj
                cost = diff * diff * bsq[j]
                if cost > budget:
                    break
                coeffs[j] = c
                if j == 0:
                    v = combo(coeffs, rows)
                    yield tuple(coeffs), v, radius_sq - (budget - cost)
                else:
                    yield from rec(j - 1, budget - cost)
                c += step
        coeffs[j] = 0

    yield from rec(r - 1, budget0)


@dataclass(frozen=True)
class LatticeBasis:
    """A lattice spanned by the given rows (rank may be below the ambient dimension)."""

    vectors: tuple

    def __post_init__(self):
        rows = tuple(tuple(as_fraction(x) for x in v) for v in self.vectors)
        if not rows:
            raise ValueError("empty basis")
        if len({len(v) for v in rows}) != 1:
            raise ValueError("basis vectors have different lengths")
        if rank(rows) != len(rows):
            raise ValueError("basis vectors are linearly dependent")
        object.__setattr__(self, "vectors", rows)

    @property
    def rank(self) -> int:
        return len(self.vectors)

    @property
    def ambient_dim(self) -> int:
        return len(self.vectors[0])

    @property
    def dim(self) -> int:
        return self.rank

    @property
    def is_full_rank(self) -> bool:
        return self.rank == self.ambient_dim

    @cached_property
    def gram(self):
        return [[dot(u, v) for v in self.vectors] for u in self.vectors]

    @cached_property
    def covolume_sq(self) -> Fraction:
        return det(self.gram)

    @property
    def covolume(self):
        """|det| for full rank, otherwise sqrt(det Gram) as an exact Power."""
        if self.is_full_rank:
            return abs(det(self.vectors))
        return Power.of(self.covolume_sq, Fraction(1, 2))

    @cached_property
    def reduced(self):
        return lll_reduce(self.vectors)

    def contains(self, v) -> bool:
        """Exact membership test."""
        v = tuple(as_fraction(x) for x in v)
        coords = self.coordinates(v)
        return coords is not None and all(c.denominator == 1 for c in coords)

    def coordinates(self, v):
        """Coordinates of v in this basis, or None if v is outside the span."""
        B = self.vectors
        G = self.gram
        rhs = [dot(b, v) for b in B]
        Ginv = inverse(G)
        c = [dot(row, rhs) for row in Ginv]
        if combo(c, B) != tuple(as_fraction(x) for x in v):
            return None
        return c


def as_basis(L) -> LatticeBasis:
    return L if isinstance(L, LatticeBasis) else LatticeBasis(tuple(L))


def _canon_key(v):
    return tuple(v)


def sign_normalize(v):
    """Multiply by -1 if needed so that the first nonzero coordinate is positive."""
    for a in v:
        if a != 0:
            return tuple(v) if a > 0 else tuple(-x for x in v)
    return tuple(v)


def _points_in_norm_ball(L: LatticeBasis, bound, norm: str, center=None):
    """Lattice points with norm(v - center) <= bound (bound squared for euclidean)."""
    red, _ = L.reduced
    if norm == "euclidean":
        radius_sq = bound
    elif norm == "sup":
        radius_sq = L.ambient_dim * bound * bound
    else:
        raise ValueError(f"unknown norm {norm!r}")
    for _, v, _ in enumerate_ball(red, radius_sq, center):
        w = v if center is None else vsub(v, center)
        if norm_value(w, norm) <= bound:
            yield v


def gauss_reduce(b1, b2):
    """Lagrange-Gauss reduction: |b1| <= |b2| and |<b1, b2>| <= |b1|^2 / 2."""
    b1, b2 = tuple(b1), tuple(b2)
    if dot(b1, b1) > dot(b2, b2):
        b1, b2 = b2, b1
    while True:
        mu = round(dot(b1, b2) / dot(b1, b1))
        if mu:
            b2 = vsub(b2, vscale(mu, b1))
        if dot(b2, b2) >= dot(b1, b1):
            return b1, b2
        b1, b2 = b2, b1


def _rank2_candidates(L: LatticeBasis):
    """Every vector that can realise a euclidean minimum of a rank-2 lattice.

    For a Gauss-reduced (b1, b2), |c1 b1 + c2 b2| <= |b2| with c2 != 0 forces
    |c1|, |c2| <= 1, and the shortest vectors with c2 = 0 are +-b1.
    """
    b1, b2 = gauss_reduce(*L.vectors)
    out = set()
    for c1 in (-1, 0, 1):
        for c2 in (-1, 0, 1):
            if c1 or c2:
                out.add(sign_normalize(combo((c1, c2), (b1, b2))))
    return out


def successive_minima(L, norm: str = "sup", return_vectors: bool = False):
    """Exact successive minima lambda_1 <= ... <= lambda_r of a lattice.

    Euclidean minima are returned squared. With ``return_vectors`` a pair
    (values, vectors) is returned; the vectors realise the minima and are
    chosen smallest-norm first, then lexicographically.
    """
    L = as_basis(L)
    _check_dim(L.ambient_dim)
    if L.rank == 2 and norm == "euclidean":
        pts = sorted(_rank2_candidates(L), key=lambda v: (dot(v, v), _canon_key(v)))
        v1 = pts[0]
        v2 = next(v for v in pts if rank([v1, v]) == 2)
        values, chosen = [dot(v1, v1), dot(v2, v2)], [v1, v2]
        return (values, chosen) if return_vectors else values
    red, _ = L.reduced
    chosen: list = []
    values: list = []
    last = Fraction(0)
    for _ in range(L.rank):
        cands = [v for v in red if rank(chosen + [v]) == len(chosen) + 1]
        upper = min(norm_value(v, norm) for v in cands)
        upper = max(upper, last)
        pts = {sign_normalize(v) for v in _points_in_norm_ball(L, upper, norm) if any(a != 0 for a in v)}
        pts = sorted(pts, key=lambda v: (norm_value(v, norm), _canon_key(v)))
        pick = next(v for v in pts if rank(chosen + [v]) == len(chosen) + 1)
        chosen.append(pick)
        last = norm_value(pick, norm)
        values.append(last)
    if return_vectors:
        return values, chosen
    return values


def shortest_vector(L, norm: str = "sup"):
    """(value, vector) of a shortest nonzero vector; sign-normalised, then lexicographic."""
    L = as_basis(L)
    _check_dim(L.ambient_dim)
    red, _ = L.reduced
    upper = min(norm_value(v, norm) for v in red)
    pts = [sign_normalize(v) for v in _points_in_norm_ball(L, upper, norm) if any(a != 0 for a in v)]
    best = min(pts, key=lambda v: (norm_value(v, norm), _canon_key(v)))
    return norm_value(best, norm), best


def shortest_grid_vector(L, shift, norm: str = "sup", return_vector: bool = False):
    """min over v in L + shift of norm(v). Zero exactly when shift lies in L."""
    L = as_basis(L)
    _check_dim(L.ambient_dim)
    shift = tuple(as_fraction(x) for x in shift)
    if len(shift) != L.ambient_dim:
        raise ValueError("shift has the wrong dimension")
    red, _ = L.reduced
    center = tuple(-x for x in shift)
    # Babai-style rounding gives a valid upper bound; enumeration does the rest.
    coords = L.__class__(tuple(red)).coordinates(center) if L.is_full_rank else None
    if coords is not None:
        guess = vadd(combo([round(c) for c in coords], red), shift)
    else:
        guess = shift
    upper = norm_value(guess, norm)
    best = None
    for v in _points_in_norm_ball(L, upper, norm, center=center):
        w = vadd(v, shift)
        key = (norm_value(w, norm), _canon_key(w))
        if best is None or key < best:
            best = key
    value, vec = best
    if return_vector:
        return value, vec
    return value


def dual_basis(L) -> LatticeBasis:
    """Rows of (B^{-1})^T for a full-rank basis B."""
    L = as_basis(L)
    if not L.is_full_rank:
        raise ValueError("dual basis needs a full-rank lattice")
    return LatticeBasis(tuple(transpose(inverse(L.vectors))))


@dataclass(frozen=True)
class DualShortest:
    vector: tuple
    value_sq: Fraction
    tie: bool  # more than one shortest vector up to sign


def dual_shortest(L) -> DualShortest:
    """Shortest nonzero dual vector (euclidean, squared), sign-normalised then lexicographic."""
    D = dual_basis(L)
    _check_dim(D.ambient_dim)
    red, _ = D.reduced
    upper = min(dot(v, v) for v in red)
    pts = {sign_normalize(v) for v in _points_in_norm_ball(D, upper, "euclidean") if any(a != 0 for a in v)}
    best_val = min(dot(v, v) for v in pts)
    shortest = sorted(v for v in pts if dot(v, v) == best_val)
    return DualShortest(shortest[0], best_val, len(shortest) > 1)


# --------------------------------------------------------------------------
# integer helpers


def xgcd(a: int, b: int):
    """(g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def unimodular_completion(a: Sequence[int]):
    """For primitive integer a, return (T, Tinv) unimodular with a @ T = e_1.

    Hence the first row of Tinv is a, column 0 of T pairs to 1 with a, and the
    remaining columns of T form a basis of the integer vectors orthogonal to a.
    """
    d = len(a)
    v = [int(x) for x in a]
    T = [[int(i == j) for j in range(d)] for i in range(d)]
    Ti = [[int(i == j) for j in range(d)] for i in range(d)]

    def col_sub(j, i, k):  # col_j -= k col_i ; row_i += k row_j on the inverse
        for r in range(d):
            T[r][j] -= k * T[r][i]
        Ti[i] = [x + k * y for x, y in zip(Ti[i], Ti[j])]
        v[j] -= k * v[i]

    def col_swap(i, j):
        for r in range(d):
            T[r][i], T[r][j] = T[r][j], T[r][i]
        Ti[i], Ti[j] = Ti[j], Ti[i]
        v[i], v[j] = v[j], v[i]

    for j in range(1, d):
        while v[j] != 0:
            k = v[0] // v[j]
            col_sub(0, j, k)
            col_swap(0, j)
    if abs(v[0]) != 1:
        raise ValueError(f"vector {tuple(a)} is not primitive")
    if v[0] == -1:
        for r in range(d):
            T[r][0] = -T[r][0]
        Ti[0] = [-x for x in Ti[0]]
        v[0] = 1
    return T, Ti


def hnf_rows(generators):
    """Row Hermite normal form basis of the integer row lattice generated."""
    rows = [list(map(int, g)) for g in generators if any(g)]
    if not rows:
        return []
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        active = [row for row in rows[r:] if row[c] != 0]
        rest = [row for row in rows[r:] if row[c] == 0]
        while len(active) > 1:
            active.sort(key=lambda row: abs(row[c]))
            p = active[0]
            nxt = [p]
            for row in active[1:]:
                k = row[c] // p[c]
                row = [x - k * y for x, y in zip(row, p)]
                if row[c] != 0:
                    nxt.append(row)
                elif any(row):
                    rest.append(row)
            active = nxt
        if not active:
            continue
        p = active[0]
        if p[c] < 0:
            p = [-x for x in p]
        rows = rows[:r] + [p] + rest
        for i in range(r):
            k = rows[i][c] // p[c]
            rows[i] = [x - k * y for x, y in zip(rows[i], p)]
        r += 1
    return [tuple(row) for row in rows[:r]]


def lattice_from_generators(generators) -> LatticeBasis:
    """Basis of the lattice generated by rational vectors (common denominator HNF)."""
    gens = [tuple(as_fraction(x) for x in g) for g in generators]
    den = 1
    for g in gens:
        for x in g:
            den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [[int(x * den) for x in g] for g in gens]
    basis = hnf_rows(ints)
    return LatticeBasis(tuple(tuple(Fraction(x, den) for x in row) for row in basis))

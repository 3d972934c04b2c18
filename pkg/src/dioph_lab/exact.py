"""Exact scalars: rationals, real quadratic surds and products of rational powers.

Every inequality that decides a verdict in this package goes through the
types defined here. Floats only appear when a value is formatted for display.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering
from numbers import Rational


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {x!r} to an exact rational")


def _squarefree_part(d: int) -> tuple[int, int]:
    """Return (k, r) with d = k*k*r and r squarefree."""
    k, r, p = 1, d, 2
    while p * p <= r:
        while r % (p * p) == 0:
            r //= p * p
            k *= p
        p += 1
    return k, r


@total_ordering
class QuadraticNumber:
    """The real number a + b*sqrt(d) with a, b rational and d > 1 squarefree."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d: int = 2):
        a, b = as_fraction(a), as_fraction(b)
        d = int(d)
        if d < 2:
            raise ValueError("discriminant must be an integer >= 2")
        k, r = _squarefree_part(d)
        if r == 1:
            a, b, r = a + b * k, Fraction(0), 2
        else:
            b = b * k
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", r)

    def __setattr__(self, name, value):
        raise AttributeError("QuadraticNumber is immutable")

    @classmethod
    def sqrt(cls, d: int) -> "QuadraticNumber":
        return cls(0, 1, d)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def _coerce(self, other):
        if isinstance(other, QuadraticNumber):
            if other.b != 0 and self.b != 0 and other.d != self.d:
                raise ValueError("mixing different quadratic fields")
            return other
        if isinstance(other, (int, Fraction, Rational)):
            return QuadraticNumber(other, 0, self.d)
        return NotImplemented

    def _field(self, other: "QuadraticNumber") -> int:
        return self.d if self.b != 0 else other.d

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadraticNumber(self.a + o.a, self.b + o.b, self._field(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = self._field(o)
        return QuadraticNumber(self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self.a, -self.b, self.d)

    def field_norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        nrm = o.field_norm()
        if nrm == 0:
            raise ZeroDivisionError("division by zero")
        num = self * o.conjugate()
        return QuadraticNumber(num.a / nrm, num.b / nrm, num.d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return QuadraticNumber(1, 0, self.d) / (self ** (-k))
        out = QuadraticNumber(1, 0, self.d)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def sign(self) -> int:
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return 1 if b > 0 else -1
        if (a > 0) == (b > 0):
            return 1 if a > 0 else -1
        # opposite signs: the larger square wins (equality impossible, sqrt(d) irrational)
        if a * a > b * b * self.d:
            return 1 if a > 0 else -1
        return 1 if b > 0 else -1

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, QuadraticNumber) else other
        if o is NotImplemented:
            return NotImplemented
        if self.b == 0 and o.b == 0:
            return self.a == o.a
        return self.a == o.a and self.b == o.b and self.d == o.d

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return (self - o).sign() < 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __floor__(self):
        guess = math.floor(float(self))
        while self < guess:
            guess -= 1
        while self >= guess + 1:
            guess += 1
        return guess

    def __ceil__(self):
        return -math.floor(-self)

    def __round__(self, ndigits=None):
        if ndigits is not None:
            return round(float(self), ndigits)
        return math.floor(self + Fraction(1, 2))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __repr__(self):
        return f"QuadraticNumber({self.a}, {self.b}, {self.d})"

    def __str__(self):
        return f"{self.a} + {self.b}*sqrt({self.d})"


def is_exact_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, QuadraticNumber))


def is_rational_scalar(x) -> bool:
    if isinstance(x, (int, Fraction)):
        return True
    return isinstance(x, QuadraticNumber) and x.is_rational


def to_rational(x) -> Fraction:
    if isinstance(x, QuadraticNumber):
        if not x.is_rational:
            raise ValueError(f"{x} is irrational")
        return x.a
    return as_fraction(x)


def frac_dist(x):
    """Distance from a real scalar to the nearest integer."""
    r = x - math.floor(x)
    other = 1 - r
    return r if r <= other else other


def dist_to_Z(v, norm: str = "sup"):
    """Distance of a vector to the nearest integer vector.

    ``norm="sup"`` returns the exact distance; ``norm="euclidean"`` returns
    its square (coordinates are independent, so the nearest point is the
    componentwise nearest integer in both norms).
    """
    if not isinstance(v, (list, tuple)):
        v = [v]
    if not v:
        raise ValueError("empty vector")
    ds = [frac_dist(x) for x in v]
    if norm == "sup":
        return max(ds)
    if norm == "euclidean":
        return sum((d * d for d in ds), Fraction(0))
    raise ValueError(f"unknown norm {norm!r}")


# --------------------------------------------------------------------------
# products of rational powers


def _as_base(x):
    if isinstance(x, QuadraticNumber):
        if x.is_rational:
            return x.a
        return x
    return as_fraction(x)


def _int_root(x: int, k: int):
    if x < 0:
        return None
    r = round(x ** (1.0 / k)) if x else 0
    for c in (r - 1, r, r + 1):
        if c >= 0 and c ** k == x:
            return c
    return None


def _perfect_root(base: Fraction, den: int):
    """(c, k) with base = c**k and k the largest divisor of den allowing this."""
    for k in sorted((d for d in range(2, den + 1) if den % d == 0), reverse=True):
        a, b = _int_root(base.numerator, k), _int_root(base.denominator, k)
        if a is not None and b is not None:
            return Fraction(a, b), k
    return base, 1


@total_ordering
class Power:
    """coeff * prod(base_i ** exp_i) with positive bases and rational exponents.

    Integer parts of exponents are folded into ``coeff`` so only genuinely
    fractional exponents are kept. Comparisons clear the exponent
    denominators by raising the ratio of the two sides to their lcm.
    """

    __slots__ = ("coeff", "factors")

    def __init__(self, coeff=1, factors=()):
        coeff = _as_base(coeff)
        acc: dict = {}
        for base, e in factors:
            base = _as_base(base)
            e = as_fraction(e)
            if base <= 0:
                raise ValueError("power bases must be positive")
            if e == 0 or base == 1:
                continue
            acc[base] = acc.get(base, Fraction(0)) + e
        for base in [bb for bb in acc if isinstance(bb, Fraction)]:
            e = acc.pop(base)
            root, k = _perfect_root(base, e.denominator)
            acc[root] = acc.get(root, Fraction(0)) + e * k
        kept = []
        for base, e in acc.items():
            if base == 1 or e == 0:
                continue
            whole = math.floor(e)
            if whole:
                coeff = coeff * base ** whole
            frac = e - whole
            if frac:
                kept.append((base, frac))
        kept.sort(key=lambda be: (float(be[0]), repr(be[0])))
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "factors", tuple(kept))

    def __setattr__(self, name, value):
        raise AttributeError("Power is immutable")

    @classmethod
    def of(cls, base, exp) -> "Power":
        return cls(1, [(base, exp)])

    @property
    def is_scalar(self) -> bool:
        return not self.factors

    def scalar(self):
        if self.factors:
            raise ValueError("not an exact scalar")
        return self.coeff

    def _coerce(self, other):
        if isinstance(other, Power):
            return other
        if is_exact_scalar(other):
            return Power(other)
        return NotImplemented

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Power(self.coeff * o.coeff, self.factors + o.factors)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.coeff == 0:
            raise ZeroDivisionError("division by zero")
        return Power(self.coeff / o.coeff, self.factors + tuple((b, -e) for b, e in o.factors))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, e):
        e = as_fraction(e)
        if e.denominator == 1:
            k = e.numerator
            if self.coeff == 0:
                if k <= 0:
                    raise ZeroDivisionError("0 to a non-positive power")
                return Power(0)
            return Power(self.coeff ** k, tuple((b, x * k) for b, x in self.factors))
        if self.coeff < 0:
            raise ValueError("fractional power of a negative number")
        if self.coeff == 0:
            if e <= 0:
                raise ZeroDivisionError("0 to a non-positive power")
            return Power(0)
        return Power(1, ((self.coeff, e),) + tuple((b, x * e) for b, x in self.factors))

    def __neg__(self):
        return Power(-self.coeff, self.factors)

    def __abs__(self):
        return self if self.coeff >= 0 else -self

    def sign(self) -> int:
        c = self.coeff
        return (c > 0) - (c < 0)

    def _cmp(self, other: "Power") -> int:
        s1, s2 = self.sign(), other.sign()
        if s1 != s2 or s1 == 0:
            return (s1 > s2) - (s1 < s2)
        ratio = self / other  # positive
        if ratio.factors:
            lcm = 1
            for _, e in ratio.factors:
                lcm = lcm * e.denominator // math.gcd(lcm, e.denominator)
            ratio = ratio ** lcm
        r = ratio.coeff
        c = (r > 1) - (r < 1)
        return c if s1 > 0 else -c

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._cmp(o) == 0

    def __hash__(self):
        if not self.factors:
            return hash(self.coeff)
        return hash((self.coeff, self.factors))

    def __lt__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._cmp(o) < 0

    def __float__(self):
        out = float(self.coeff)
        for b, e in self.factors:
            out *= float(b) ** float(e)
        return out

    def __floor__(self):
        if not self.factors:
            return math.floor(self.coeff)
        guess = math.floor(float(self))
        while self < guess:
            guess -= 1
        while self >= guess + 1:
            guess += 1
        return guess

    def __ceil__(self):
        return -math.floor(-self)

    def __repr__(self):
        if not self.factors:
            return f"Power({self.coeff})"
        return f"Power({self.coeff}, {list(self.factors)})"

    def __str__(self):
        parts = [format_exact(self.coeff)]
        for b, e in self.factors:
            parts.append(f"({format_exact(b)})^({e})")
        return "*".join(parts)


def exact_floor(x) -> int:
    return math.floor(x)


# --------------------------------------------------------------------------
# serialization


def format_exact(x) -> str:
    if isinstance(x, bool):
        raise TypeError("booleans are not exact scalars")
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, QuadraticNumber):
        return f"{x.a} + {x.b}*sqrt({x.d})"
    if isinstance(x, Power):
        return str(x)
    raise TypeError(f"not an exact value: {x!r}")


def to_json_value(x):
    """JSON-ready form: "p/q" strings, quadratic dicts, nested lists."""
    if isinstance(x, (list, tuple)):
        return [to_json_value(v) for v in x]
    if isinstance(x, QuadraticNumber):
        if x.is_rational:
            return str(x.a)
        return {"a": str(x.a), "b": str(x.b), "disc": x.d}
    if isinstance(x, Power):
        if x.is_scalar:
            return to_json_value(x.coeff)
        return {"coeff": to_json_value(x.coeff),
                "factors": [[to_json_value(b), str(e)] for b, e in x.factors]}
    if isinstance(x, int) and not isinstance(x, bool):
        return str(x)
    if isinstance(x, Fraction):
        return str(x)
    raise TypeError(f"not an exact value: {x!r}")


def parse_exact(obj):
    """Inverse of :func:`to_json_value` for scalars, vectors and matrices."""
    if isinstance(obj, list):
        return [parse_exact(v) for v in obj]
    if isinstance(obj, dict):
        if "disc" in obj:
            return QuadraticNumber(Fraction(str(obj["a"])), Fraction(str(obj.get("b", 0))), int(obj["disc"]))
        if "coeff" in obj:
            return Power(parse_exact(obj["coeff"]), [(parse_exact(b), Fraction(e)) for b, e in obj["factors"]])
        raise ValueError(f"unrecognised exact value {obj!r}")
    if isinstance(obj, bool):
        raise ValueError("booleans are not exact scalars")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        s = obj.strip()
        if "sqrt" in s:
            return _parse_surd(s)
        return Fraction(s)
    if isinstance(obj, float):
        raise ValueError("floats are not accepted as exact input; use 'p/q'")
    raise ValueError(f"unrecognised exact value {obj!r}")


def _parse_surd(s: str) -> QuadraticNumber:
    """Parse 'a + b*sqrt(D)' or 'sqrt(D) - 1' style strings."""
    import re

    s = s.replace(" ", "")
    m = re.fullmatch(r"(?:([+-]?[0-9/]+)(?=[+-]))?([+-]?)(?:([0-9/]+)\*)?sqrt\((\d+)\)([+-][0-9/]+)?", s)
    if not m:
        raise ValueError(f"cannot parse quadratic surd {s!r}")
    a1, sgn, coef, disc, a2 = m.groups()
    a = Fraction(a1 or 0) + Fraction(a2 or 0)
    b = Fraction(coef or 1) * (-1 if sgn == "-" else 1)
    return QuadraticNumber(a, b, int(disc))


def sqrt_sum_less(a, b, c, strict: bool = True) -> bool:
    """Decide sqrt(a) + sqrt(b) < sqrt(c) (or <=) exactly for a, b, c >= 0."""
    d = c - a - b
    if d < 0:
        return False
    lhs, rhs = 4 * a * b, d * d
    return lhs < rhs if strict else lhs <= rhs

"""Certified interval evaluation of exact scalars (mpmath ``iv`` backend)."""
from __future__ import annotations

from contextlib import contextmanager
from fractions import Fraction

from mpmath import iv

from .exact import Power, QuadraticNumber, as_fraction

DEFAULT_DPS = 60
MAX_DPS = 960


class PrecisionExhausted(ArithmeticError):
    """An interval comparison stayed undecided at the maximal precision."""


@contextmanager
def precision(dps: int):
    old = iv.dps
    iv.dps = dps
    try:
        yield
    finally:
        iv.dps = old


def frac_iv(x):
    x = as_fraction(x)
    return iv.mpf(x.numerator) / x.denominator


def to_iv(x):
    """Enclosure of an exact scalar at the current precision."""
    if isinstance(x, Power):
        out = to_iv(x.coeff)
        for base, e in x.factors:
            out = out * iv.exp(frac_iv(e) * iv.log(to_iv(base)))
        return out
    if isinstance(x, QuadraticNumber):
        return frac_iv(x.a) + frac_iv(x.b) * iv.sqrt(iv.mpf(x.d))
    if isinstance(x, (int, Fraction)):
        return frac_iv(x)
    if isinstance(x, type(iv.mpf(0))):
        return x
    raise TypeError(f"cannot enclose {x!r}")


def iv_lt(x, y):
    """True / False when decided, None when the enclosures overlap."""
    if x.b < y.a:
        return True
    if x.a >= y.b:
        return False
    return None


def certify_lt(build_lhs, build_rhs, dps: int = DEFAULT_DPS, max_dps: int = MAX_DPS) -> bool:
    """Decide lhs < rhs, rebuilding both enclosures at rising precision."""
    while dps <= max_dps:
        with precision(dps):
            verdict = iv_lt(build_lhs(), build_rhs())
        if verdict is not None:
            return verdict
        dps *= 2
    raise PrecisionExhausted(f"comparison undecided at {max_dps} digits")


def iv_mid(x) -> float:
    return float((x.a + x.b) / 2)

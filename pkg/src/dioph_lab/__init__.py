"""Exact finite-instance checks for twisted inhomogeneous Diophantine approximation."""

from .exact import Power, QuadraticNumber, parse_exact
from .kernel import AffinePair, eps_bad_witness

__all__ = ["AffinePair", "Power", "QuadraticNumber", "eps_bad_witness", "parse_exact"]
__version__ = "0.1.0"

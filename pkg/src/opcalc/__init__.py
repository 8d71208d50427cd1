"""Exact normal forms for linear operators on the free module R^(N).

Every endomorphism of V = R^(N) is uniquely a locally finite sum
sum_n P_n(U) o D^n of polynomials in the raising operator U composed with
powers of the lowering operator D. This package computes that normal form
lazily and exactly, and works with the algebra it induces.
"""

from .freemodule import Operator, Vector, basis, named_operator
from .normalform import NormalSeries, normalize, star, umbral
from .ring import QQ, ZZ, Polynomial, PowerSeries1, Ring, Zmod

__version__ = "0.1.0"

__all__ = [
    "QQ",
    "ZZ",
    "Zmod",
    "Ring",
    "Polynomial",
    "PowerSeries1",
    "Vector",
    "basis",
    "Operator",
    "named_operator",
    "NormalSeries",
    "normalize",
    "star",
    "umbral",
]

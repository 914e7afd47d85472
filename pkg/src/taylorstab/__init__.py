"""Certified computations on the stability regions of Taylor partial sums of exp."""

__version__ = "0.1.0"

from .exactnum import DomainError, DyadicInterval, Indeterminate, PrecisionExhausted
from .taylorpoly import ComplexPoint, IntPoly, RatPoly2

__all__ = [
    "__version__",
    "DomainError",
    "DyadicInterval",
    "Indeterminate",
    "PrecisionExhausted",
    "ComplexPoint",
    "IntPoly",
    "RatPoly2",
]

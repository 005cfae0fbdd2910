"""Exact and arbitrary-precision tools for the quantum minimal-surface
recursions: positive-solution shooting, exact expansion polynomial
families, the bivariate polynomial tower, Riccati/Schrödinger structure
on fractional-order Bessel functions, the Darboux factorization ladder,
and the semiclassical comparison series.
"""

__version__ = "1.0.0"

from .polynomials import BiPoly, NotDivisible, UniPoly
from .rationals import Q, rat, rat_str
from .solver import (BracketNotFound, NewtonDiverged, PrecisionExhausted,
                     SolverError, VSequence, shoot_cubic, shoot_parabolic)

__all__ = [
    "__version__", "Q", "rat", "rat_str", "UniPoly", "BiPoly", "NotDivisible",
    "VSequence", "shoot_parabolic", "shoot_cubic", "SolverError",
    "PrecisionExhausted", "BracketNotFound", "NewtonDiverged",
]

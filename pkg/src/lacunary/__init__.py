"""Exact constructions of gap power series with integer coefficients.

Submodules: ``bigpoly`` (integer polynomials), ``algebraic`` (algebraic
numbers and number-field elements), ``indexsets`` (sets of indices and
densities), ``kernelfit`` (support fitting), ``engines`` (the block
constructions), ``verify`` (exact checks) and ``cli``.
"""

from .algebraic import AlgebraicNumber, FieldElement, enumerate_unit_ball, make_algebraic, rational
from .bigpoly import IntPolynomial, RationalComplex
from .engines import BlockSeries, build_thm1, build_thm2, build_thm3, build_thm4, coefficients
from .indexsets import IndexSet, parse_set
from .kernelfit import support_fit
from .verify import VerificationReport

__all__ = [
    "AlgebraicNumber", "FieldElement", "enumerate_unit_ball", "make_algebraic", "rational",
    "IntPolynomial", "RationalComplex", "BlockSeries", "build_thm1", "build_thm2", "build_thm3",
    "build_thm4", "coefficients", "IndexSet", "parse_set", "support_fit", "VerificationReport",
]

__version__ = "0.1.0"

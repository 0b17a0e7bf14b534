"""Exact arithmetic over F_q: fields, polynomials, dense matrices, elementary divisors."""

from .field import GF, Field, FqElement, SquareClass, is_prime, prime_power, square_class
from .linalg import FqMatrix, charpoly, elementary_divisors, read_matrix, write_matrix
from .poly import FqPoly, factorize, irreducibles, is_irreducible, reciprocal, twist

__all__ = [
    "GF", "Field", "FqElement", "SquareClass", "square_class", "is_prime", "prime_power",
    "FqPoly", "factorize", "reciprocal", "twist", "is_irreducible", "irreducibles",
    "FqMatrix", "charpoly", "elementary_divisors", "read_matrix", "write_matrix",
]

"""Exact computations for A_k singularities of bidegree (a, b) plane curves."""

from .field import QuadFieldElement, field_sqrt, sqrt_unit
from .poly import MultiPoly, binary_form_roots, gcd, squarefree_test
from .parse import ParseError, parse_poly

__all__ = [
    "MultiPoly",
    "ParseError",
    "QuadFieldElement",
    "binary_form_roots",
    "field_sqrt",
    "gcd",
    "parse_poly",
    "sqrt_unit",
    "squarefree_test",
]

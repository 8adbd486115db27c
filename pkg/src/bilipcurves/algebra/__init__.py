"""Exact arithmetic kernel: rationals, polynomials, resultants, dynamic evaluation."""

from fractions import Fraction as BigRat

from . import upoly
from .extension import ExtensionField, SplitEvent, adjoin_root, charpoly, ext_invert, split_run
from .multipoly import MultiPoly
from .parse import ParseError, parse_poly
from .resultant import bareiss_det, resultant, sylvester_matrix, uresultant


def squarefree_part(f: MultiPoly) -> MultiPoly:
    """Monic squarefree part of a univariate MultiPoly."""
    if f.is_zero():
        raise ValueError("squarefree part of the zero polynomial")
    used = f.used_variables()
    name = used[0] if used else f.variables[0]
    return MultiPoly.from_upoly(f.variables, name, upoly.squarefree_part(f.to_upoly(name)))


__all__ = [
    "BigRat",
    "ExtensionField",
    "MultiPoly",
    "ParseError",
    "SplitEvent",
    "adjoin_root",
    "bareiss_det",
    "charpoly",
    "ext_invert",
    "parse_poly",
    "resultant",
    "split_run",
    "squarefree_part",
    "sylvester_matrix",
    "upoly",
    "uresultant",
]

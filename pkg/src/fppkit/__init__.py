"""fppkit: exact computer algebra for searching, lifting and recognizing
special members of linear systems on embedded surfaces.

Finite-field searches for nonreduced hyperplane cuts, Hensel lifting,
lattice-reduction recognition over quadratic fields, graded linear algebra
(Hilbert functions, vanishing forms, jets) and equivariant coordinate changes.
"""

from .errors import FppError
from .poly import CyclicAction, Polynomial, PolyRing, parse_poly
from .ring import GF, QQ, Modulus, QuadElem, QuadraticField, ZMod, ZModElem, reduce_quad, sqrt_mod

__version__ = "0.1.0"

__all__ = [
    "CyclicAction",
    "FppError",
    "GF",
    "Modulus",
    "Polynomial",
    "PolyRing",
    "QQ",
    "QuadElem",
    "QuadraticField",
    "ZMod",
    "ZModElem",
    "parse_poly",
    "reduce_quad",
    "sqrt_mod",
]

"""Searches and constructions on top of the graded linear algebra: cut search,
guided zero-dimensional solving, equivariant coordinate changes, sparsification
and invariant ansatz families."""

from .ansatz import InvariantFamily, ansatz_invariant_form, orbit_sums
from .coordchange import check_coordinate_change, commutant_basis, equivariant_coordinate_change
from .cuts import InvariantCutPattern, SearchReport, search_nonreduced_cuts
from .guided import GuidedSolution, hilbert_guided_solve, reduce_system, verify_solution
from .sparsify import monomial_count, sparsify_basis

__all__ = [
    "GuidedSolution",
    "InvariantCutPattern",
    "InvariantFamily",
    "SearchReport",
    "ansatz_invariant_form",
    "check_coordinate_change",
    "commutant_basis",
    "equivariant_coordinate_change",
    "hilbert_guided_solve",
    "monomial_count",
    "orbit_sums",
    "reduce_system",
    "search_nonreduced_cuts",
    "sparsify_basis",
    "verify_solution",
]

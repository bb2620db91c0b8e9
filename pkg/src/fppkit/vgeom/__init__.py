"""Graded linear algebra and small-scale elimination on homogeneous ideals."""

from .forms import check_vanishing, vanishing_forms, vanishing_forms_by_weight
from .graded import GradedIdeal, graded_piece_rank, hilbert_function, hilbert_polynomial
from .groebner import groebner_basis, ideal_contains, is_groebner_basis, normal_form
from .ideal import HilbertData, Ideal, ProjPoint
from .jets import Jet, LinearConditions, jets_at_point, vanish_to_order_conditions, vanishing_order
from .sampling import enumerate_points, sample_points
from .singular import CurveTester, is_nonreduced_curve, singular_locus
from .zerodim import ZeroDimSolution, solve_zero_dim

__all__ = [
    "CurveTester",
    "GradedIdeal",
    "HilbertData",
    "Ideal",
    "Jet",
    "LinearConditions",
    "ProjPoint",
    "ZeroDimSolution",
    "check_vanishing",
    "enumerate_points",
    "graded_piece_rank",
    "groebner_basis",
    "hilbert_function",
    "hilbert_polynomial",
    "ideal_contains",
    "is_groebner_basis",
    "is_nonreduced_curve",
    "jets_at_point",
    "normal_form",
    "sample_points",
    "singular_locus",
    "solve_zero_dim",
    "vanish_to_order_conditions",
    "vanishing_forms",
    "vanishing_forms_by_weight",
    "vanishing_order",
]

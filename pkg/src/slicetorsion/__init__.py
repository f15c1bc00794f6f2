"""Twisted Reidemeister torsion obstructions to links being slice."""

from .cyclotomic import Cyclotomic, RootOfUnity, cyclotomic_polynomial
from .laurent import LaurentMatrix, LaurentPoly, RationalFunction, laurent_det, laurent_rank
from .monomial_rep import (FreeWord, MonomialMatrix, MonomialRep, bing_fig8_rep, det_group, eigenvalues,
                           evaluate_word, mono_inv, mono_mul, verify_p_group)
from .normtest import rational_norm_class, represent_as_hermitian_square
from .satellite import (AlexanderPoly, alexander_from_seifert, bing_double_obstruction, eval_at_root,
                        satellite_factor)
from .torsion import (BoundarySeifertMatrix, PsiMap, TorsionClass, boundary_torsion, build_twisted_matrix,
                      rank_of_link, slice_consequence_check, unlink_torsion, validate_seifert)

__version__ = "0.1.0"

__all__ = [
    "AlexanderPoly",
    "BoundarySeifertMatrix",
    "Cyclotomic",
    "FreeWord",
    "LaurentMatrix",
    "LaurentPoly",
    "MonomialMatrix",
    "MonomialRep",
    "PsiMap",
    "RationalFunction",
    "RootOfUnity",
    "TorsionClass",
    "alexander_from_seifert",
    "bing_double_obstruction",
    "bing_fig8_rep",
    "boundary_torsion",
    "build_twisted_matrix",
    "cyclotomic_polynomial",
    "det_group",
    "eigenvalues",
    "eval_at_root",
    "evaluate_word",
    "laurent_det",
    "laurent_rank",
    "mono_inv",
    "mono_mul",
    "rank_of_link",
    "rational_norm_class",
    "represent_as_hermitian_square",
    "satellite_factor",
    "slice_consequence_check",
    "unlink_torsion",
    "validate_seifert",
    "verify_p_group",
]

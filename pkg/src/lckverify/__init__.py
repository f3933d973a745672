"""Exact-arithmetic verification of locally conformally Kaehler structures
on low-dimensional Lie algebras, with builders for higher dimensions."""

__version__ = "0.1.0"

from .exterior import KForm, interior_product, parse_form, wedge
from .hermitian import (
    Automorphism,
    ComplexStructure,
    dual_to_primal,
    gram_metric,
    is_automorphism,
    is_complex_structure,
    is_j_invariant,
    is_positive_at,
    pullback_form,
)
from .lck import (
    Constraint,
    LcKStructure,
    lee_form,
    morse_novikov_betti,
    vaisman_test,
    verify_lck,
)
from .liealg import LieAlgebra, parse_salamon
from .scalars import QQ, Polynomial, Scalar, ScalarField, scalar_eval, scalar_is_zero
from .solver import (
    SolutionSpace,
    degeneracy_certificate,
    lck_space,
    positivity_clash,
    twisted_closed_space,
)

__all__ = [
    "__version__",
    "QQ", "Polynomial", "Scalar", "ScalarField", "scalar_eval", "scalar_is_zero",
    "KForm", "wedge", "interior_product", "parse_form",
    "LieAlgebra", "parse_salamon",
    "ComplexStructure", "Automorphism", "dual_to_primal", "is_complex_structure",
    "pullback_form", "is_automorphism", "is_j_invariant", "gram_metric",
    "is_positive_at",
    "LcKStructure", "Constraint", "verify_lck", "lee_form", "vaisman_test",
    "morse_novikov_betti",
    "SolutionSpace", "twisted_closed_space", "lck_space",
    "degeneracy_certificate", "positivity_clash",
]

"""Exact computations for abelian groups, filtered complexes, integer matrices and cohomology rings."""

from .abelian import (
    INF,
    Morphism,
    Presentation,
    Subgroup,
    canonicalize,
    exponent_group,
    exponent_morphism,
    lattice_part,
    minkowski_bound,
    subgroup_type_p,
    torsion_subgroup,
    verify_square_bounds,
)
from .complexes import CochainComplex, cohomology, is_dQ_zero, lattice_inclusion, torsion_comparison
from .kernels import BACKEND
from .matrix import IntMatrix, InvalidInput, smith_normal_form
from .matrix_roots import (
    BudgetExceeded,
    OrderResult,
    automorphism_order,
    char_poly,
    find_root_bruteforce,
    finite_order,
    is_quasi_unipotent,
    verify_root_binomial,
)
from .rings import (
    GradedRing,
    c3,
    cup_map,
    delta_d,
    discsym_bound,
    find_wls_class,
    is_wls_class,
    poincare_duality_check,
    product_ring,
    tau,
    validate_ring,
)
from .spectral import (
    FilteredComplex,
    degeneracy_bound,
    degenerates_at_E2_Q,
    page_inclusion,
    spectral_pages,
    verify_tensoring_Q,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "INF",
    "BudgetExceeded",
    "CochainComplex",
    "FilteredComplex",
    "GradedRing",
    "IntMatrix",
    "InvalidInput",
    "Morphism",
    "OrderResult",
    "Presentation",
    "Subgroup",
    "automorphism_order",
    "c3",
    "canonicalize",
    "char_poly",
    "cohomology",
    "cup_map",
    "degeneracy_bound",
    "degenerates_at_E2_Q",
    "delta_d",
    "discsym_bound",
    "exponent_group",
    "exponent_morphism",
    "find_root_bruteforce",
    "find_wls_class",
    "finite_order",
    "is_dQ_zero",
    "is_quasi_unipotent",
    "is_wls_class",
    "lattice_inclusion",
    "lattice_part",
    "minkowski_bound",
    "page_inclusion",
    "poincare_duality_check",
    "product_ring",
    "smith_normal_form",
    "spectral_pages",
    "subgroup_type_p",
    "tau",
    "torsion_comparison",
    "torsion_subgroup",
    "validate_ring",
    "verify_root_binomial",
    "verify_square_bounds",
    "verify_tensoring_Q",
]

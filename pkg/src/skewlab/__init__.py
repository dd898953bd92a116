"""Finite-ring laboratory for skew polynomial extensions.

Builds finite rings from tables or block structure, attaches twisting
endomorphisms and derivations, multiplies skew polynomials through a
rewriting engine with an independent closed-formula oracle, and decides
rigidity and zero-product (Armendariz-style) properties by exhaustive
or budgeted search.  `skewlab.theorems.run_all` sweeps the statement
suite over the builtin instance catalog; the `skewlab` console script
exposes the same checks over small spec files.
"""
from .backend import get_backend, numba_available, set_backend
from .catalog import (
    BUILTIN_RINGS,
    BUILTIN_SYSTEMS,
    UnknownNameError,
    catalog_listing,
    get_map,
    get_ring,
    get_system,
)
from .maps import (
    MapVerificationError,
    RingMap,
    SigmaDerivation,
    SigmaFamily,
    id_minus_sigma_derivation,
    identity_map,
    orbit_closure,
    sigma_power,
    verify_endomorphism,
    verify_sigma_derivation,
    zero_derivation,
)
from .poly import (
    CommutationSystem,
    MonomialOrder,
    PbwAxiomError,
    PbwReport,
    SkewPoly,
    mono_times_coeff_closed,
    mono_times_coeff_engine,
    monomials_upto,
    require_pbw,
    verify_pbw_axioms,
)
from .properties import (
    ConsistencyError,
    NotEndomorphismTypeError,
    PropertyVerdict,
    SearchBudget,
    block_elementary_subset,
    is_sigma_delta_skew_armendariz,
    is_sigma_rigid,
    is_skew_armendariz,
    is_skew_pi_armendariz,
    is_sigma_skew_armendariz,
    is_weak_armendariz,
    is_weak_sigma_rigid,
    is_weak_sigma_rigid_ideal,
    is_weak_sigma_skew_armendariz,
)
from .rings import (
    BudgetError,
    FiniteRing,
    RingConstructionError,
    RingError,
    SRing,
    SubsetIdeal,
    TableRing,
    abelian_failure,
    central_idempotents,
    idempotents,
    is_abelian,
    is_central,
    is_ni,
    is_reduced,
    make_ideal,
    make_matrix_ring,
    make_product,
    make_r3,
    make_s_ring,
    make_zn,
    ni_failure,
    nil_mask_cycle_detect,
    nil_mask_power_bound,
    nil_set,
    power_trajectory,
    verify_ring_laws,
)
from .theorems import DEFAULT_ENTRIES, TheoremReport, run_all

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_RINGS",
    "BUILTIN_SYSTEMS",
    "BudgetError",
    "CommutationSystem",
    "ConsistencyError",
    "DEFAULT_ENTRIES",
    "FiniteRing",
    "MapVerificationError",
    "MonomialOrder",
    "NotEndomorphismTypeError",
    "PbwAxiomError",
    "PbwReport",
    "PropertyVerdict",
    "RingConstructionError",
    "RingError",
    "RingMap",
    "SRing",
    "SearchBudget",
    "SigmaDerivation",
    "SigmaFamily",
    "SkewPoly",
    "SubsetIdeal",
    "TableRing",
    "TheoremReport",
    "UnknownNameError",
    "abelian_failure",
    "block_elementary_subset",
    "catalog_listing",
    "central_idempotents",
    "get_backend",
    "get_map",
    "get_ring",
    "get_system",
    "id_minus_sigma_derivation",
    "idempotents",
    "identity_map",
    "is_abelian",
    "is_central",
    "is_ni",
    "is_reduced",
    "is_sigma_delta_skew_armendariz",
    "is_sigma_rigid",
    "is_sigma_skew_armendariz",
    "is_skew_armendariz",
    "is_skew_pi_armendariz",
    "is_weak_armendariz",
    "is_weak_sigma_rigid",
    "is_weak_sigma_rigid_ideal",
    "is_weak_sigma_skew_armendariz",
    "make_ideal",
    "make_matrix_ring",
    "make_product",
    "make_r3",
    "make_s_ring",
    "make_zn",
    "mono_times_coeff_closed",
    "mono_times_coeff_engine",
    "monomials_upto",
    "ni_failure",
    "nil_mask_cycle_detect",
    "nil_mask_power_bound",
    "nil_set",
    "numba_available",
    "orbit_closure",
    "power_trajectory",
    "require_pbw",
    "run_all",
    "set_backend",
    "sigma_power",
    "verify_endomorphism",
    "verify_pbw_axioms",
    "verify_ring_laws",
    "verify_sigma_derivation",
    "zero_derivation",
]

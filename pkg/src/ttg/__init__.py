"""Exact tensor-triangular geometry over desk-scale commutative rings.

Builds the category of bounded free complexes over a small class of rings
(integers, polynomials over small prime fields, principal quotients,
single-element localizations, finite products), computes homological
supports and the lattice dictionary to tensor-thick subcategories,
assembles the spectrum with its basis topology, transports everything
along ring maps, models sections over opens by localization, and
reconstructs the reduced ring data from the category-side constructions.
"""

from .complexes import (
    ChainMap,
    Complex,
    chain_map_basis,
    cone,
    direct_sum,
    hom_up_to_homotopy,
    homology,
    homology_all,
    identity_map,
    is_null_homotopic,
    koszul_cone,
    scalar_map,
    shift,
    tensor,
    unit_complex,
    zero_complex,
)
from .endo import (
    IdentityEndo,
    evaluate_at_unit,
    is_pointwise_nilpotent,
    multiplier_endo,
    reconstruct_ringed_space,
    restrict_endo,
)
from .errors import (
    FactorBoundExceeded,
    MalformedInput,
    SizeLimitExceeded,
    TTGError,
    UnsupportedRing,
)
from .linalg import Matrix, ModuleClass, ModuleComponent, kernel_basis, smith_normal_form, solve
from .morphisms import (
    RingMap,
    compose_maps,
    contract_point,
    eval_element,
    identity_ring_map,
    localization_inclusion,
    maps_equal_derived,
    preimage_support,
    pullback,
    spc_map,
    verify_geometric,
)
from .presheaf import (
    BasicOpen,
    clear_denominators,
    fraction_check,
    molecular_check,
    open_from_complement,
    principal_open,
    restrict_complex,
    restriction_map,
    section_ring,
    whole_open,
)
from .rings import (
    Frac,
    FactorLimits,
    IntegerRing,
    LocalizedRing,
    PolynomialRing,
    ProductRing,
    QuotientRing,
    Ring,
    SpcPoint,
    Z,
    ZeroRing,
    enumerate_points,
    factor_element,
    localize_ring,
    nilradical_quotient,
    ring_from_json,
)
from .spectrum import (
    SpectrumModel,
    build_spectrum,
    check_topology_axioms,
    is_atomic,
    point_to_subcategory,
    subcategory_to_point,
    to_dot,
)
from .supports import (
    Support,
    generators_support,
    membership,
    realize_support,
    subcategory_from_generators,
    subcategory_from_support,
    supph,
    theta_step,
)

__version__ = "0.1.0"

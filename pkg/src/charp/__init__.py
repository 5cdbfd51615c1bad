"""Exact constructions over characteristic-p discrete valued fields.

The package builds, certifies, and serializes: Witt-vector arithmetic,
cyclic Artin-Schreier towers (including ascent one layer at a time and
lifts of purely inseparable residue extensions), Gauss valuations on the
resulting towers, and cyclic crossed-product algebras with division
certificates.
"""

from .errors import CharpError
from .fields import (
    INFINITY,
    FunctionField,
    LaurentExpansion,
    MultiPoly,
    PolynomialRing,
    PrimeField,
    RationalFunction,
    Rationals,
    ValuedField,
    frobenius,
)
from .pstructure import (
    ASClassCertificate,
    PIndependenceCertificate,
    is_pth_power,
    not_in_AS_image,
    p_independent,
    p_rank,
    subfield_intersection_trivial,
)
from .witt import (
    ASWLayerSystem,
    GhostCalculus,
    WittVector,
    asw_layer_equations,
    witt_add,
    witt_frobenius,
    witt_neg,
    witt_sub,
    witt_verschiebung,
    witt_zero,
)
from .towers import (
    ResidueFieldPresentation,
    TowerElement,
    TowerField,
    albert_ascend,
    albert_data,
    certify_tower,
    cyclic_lift_inseparable,
    disjoint_pair,
    gauss_valuation,
    inertial_lift,
    inertial_residue,
    tower_residue,
    weakly_unramified_certificate,
)
from .algebra import (
    AlgebraElement,
    CyclicAlgebra,
    DivisionCertificate,
    ValueGroupData,
    build_algebra,
    center_dimension,
    division_certificate,
    inseparable_subfield_certificate,
    reduced_norm,
    semiramified_residue,
    theorem2_demo,
)

__version__ = "0.1.0"

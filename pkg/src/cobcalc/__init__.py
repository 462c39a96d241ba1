"""Exact-arithmetic calculators for Lagrangian cobordism invariants.

The package computes normal forms and complete invariants in the
Lagrangian cobordism groups of the 2-torus and of the space mirror to a
bielliptic surface, together with the matching Grothendieck-group and
Chow-ring computation on the mirror side.  All arithmetic is exact:
integers, Fractions, and finitely generated abelian groups in
invariant-factor form.
"""

from cobcalc.abelian import (
    CircleValue,
    FGAbelianGroup,
    FormalSum,
    GroupElement,
    GroupHom,
    IntegerMatrix,
    cokernel,
    n_torsion,
    smith_normal_form,
)
from cobcalc.chow_k0 import (
    ChowClass,
    DivisorClass,
    EllipticModel,
    IntersectionTable,
    K0Class,
    PointClass,
    build_quasilinear,
    chern,
    chern_correction,
    h_map,
    intersect,
)
from cobcalc.cob_biell import (
    Fiber,
    InvariantTuple,
    LiftX,
    LiftY,
    Section,
    is_cobordant,
    normal_form,
)
from cobcalc.cob_t2 import CircleBrane, is_cobordant_t2, normal_form_t2
from cobcalc.mirror import coordinate_change, mirror_class, verify_isomorphism
from cobcalc.roitman import (
    AlternatingForm,
    GradedSpace,
    Subspace,
    check_bound,
    is_isotropic,
    summed_pullback,
)

__all__ = [
    "AlternatingForm",
    "ChowClass",
    "CircleBrane",
    "CircleValue",
    "DivisorClass",
    "EllipticModel",
    "FGAbelianGroup",
    "Fiber",
    "FormalSum",
    "GradedSpace",
    "GroupElement",
    "GroupHom",
    "IntegerMatrix",
    "IntersectionTable",
    "InvariantTuple",
    "K0Class",
    "LiftX",
    "LiftY",
    "PointClass",
    "Section",
    "Subspace",
    "build_quasilinear",
    "check_bound",
    "chern",
    "chern_correction",
    "cokernel",
    "coordinate_change",
    "h_map",
    "intersect",
    "is_cobordant",
    "is_cobordant_t2",
    "is_isotropic",
    "mirror_class",
    "n_torsion",
    "normal_form",
    "normal_form_t2",
    "smith_normal_form",
    "summed_pullback",
]

__version__ = "0.1.0"

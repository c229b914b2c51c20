"""Desk-scale computational invariant theory: circuits, identity testing, torus
invariants, null-cone LPs, hyperpfaffians and representation audits."""

from .circuit import (
    Assignment,
    Circuit,
    CircuitBuilder,
    PrimeField,
    QQ,
    evaluate,
    homogeneous_components,
    substitute_main_vars,
    validate,
)
from .hyperpf import hyperpfaffian_eval, projection_identity_check, projection_point, wedge_pairing
from .nullcone import fractional_matching, null_cone_membership
from .pit import PitConfig, pit
from .repaudit import extract_invariant, invariant_dimension
from .torus import (
    MatchingInstance,
    Tensor3,
    brute_force_matching,
    decide_matching_via_encoding,
    reference_encoding,
    verify_min_degree,
)

__all__ = [
    "Assignment",
    "Circuit",
    "CircuitBuilder",
    "MatchingInstance",
    "PitConfig",
    "PrimeField",
    "QQ",
    "Tensor3",
    "brute_force_matching",
    "decide_matching_via_encoding",
    "evaluate",
    "extract_invariant",
    "fractional_matching",
    "homogeneous_components",
    "hyperpfaffian_eval",
    "invariant_dimension",
    "null_cone_membership",
    "pit",
    "projection_identity_check",
    "projection_point",
    "reference_encoding",
    "substitute_main_vars",
    "validate",
    "verify_min_degree",
    "wedge_pairing",
]

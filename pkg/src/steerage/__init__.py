"""Steering paradox analysis for quantum states whose conditional states are pure."""

from .assemblage import Assemblage, AssemblageError, compute_assemblage, normalized_view
from .linalg import SubsystemShape, partial_trace, projector_fidelity, rank_one_decompose, tensor_product
from .measurements import Protocol, ProjectorSet, basis_setting, explicit_setting, parse_shorthand
from .paradox import (
    CaseLabel,
    ParadoxReport,
    Verdict,
    analyze,
    check_premise,
    classify,
    lhs_reduce,
    measurement_requirement,
)
from .states import StateSpec, builtin, mixed_state, pure_state, to_density

__all__ = [
    "Assemblage",
    "AssemblageError",
    "CaseLabel",
    "ParadoxReport",
    "ProjectorSet",
    "Protocol",
    "StateSpec",
    "SubsystemShape",
    "Verdict",
    "analyze",
    "basis_setting",
    "builtin",
    "check_premise",
    "classify",
    "compute_assemblage",
    "explicit_setting",
    "lhs_reduce",
    "measurement_requirement",
    "mixed_state",
    "normalized_view",
    "parse_shorthand",
    "partial_trace",
    "projector_fidelity",
    "pure_state",
    "rank_one_decompose",
    "tensor_product",
    "to_density",
]

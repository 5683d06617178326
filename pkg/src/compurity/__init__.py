"""Purity-based measures of N-party pure-state entanglement and their
center-of-mass geometry."""

__version__ = "0.1.0"

from .errors import EntanglementError
from .state import PureState, apply_local_unitary, merge_parties, named_state, permute_parties, validate
from .reduction import EntanglementProfile, partial_trace, profile, purity, q_measure, schmidt_weight
from .schmidt import SchmidtForm, eigh, signed_mass_q, to_schmidt

__all__ = [
    "EntanglementError",
    "EntanglementProfile",
    "PureState",
    "SchmidtForm",
    "apply_local_unitary",
    "eigh",
    "merge_parties",
    "named_state",
    "partial_trace",
    "permute_parties",
    "profile",
    "purity",
    "q_measure",
    "schmidt_weight",
    "signed_mass_q",
    "to_schmidt",
    "validate",
]

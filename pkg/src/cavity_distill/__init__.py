"""Entanglement concentration and purification for cavity-coupled atomic ensembles."""
from .cavity import CavityParams, ReflectionPair, reflect_coupled, reflect_empty, reflection_operator
from .pcd import pcd_apply
from .protocols import (
    IterationTrace,
    ProtocolResult,
    bit_flip_mixture,
    convert_phase_flip,
    efficient_ecp,
    epp_iterate,
    epp_round,
    ghz_concentrate,
    optimal_ecp,
)
from .qstate import LinearOp, MixedEnsemble, PureState, apply, fidelity, measure, tensor

__version__ = "0.1.0"

"""Agnostic tomography of stabilizer product states."""
from .learner import AlgorithmParams, BasisMeasurer, RunReport, derive_params, run
from .oracle import brute_force_fsp, brute_force_q, certify_run
from .pauli import (
    LocalSpan,
    PauliOp,
    StabilizerProductGroup,
    StabilizerProductState,
    extensions,
    local_anticommute_count,
    local_span,
    parse_pauli,
    symplectic_product,
)
from .sampler import BellSampler, build_sampler
from .states import (
    QuantumState,
    apply_depolarizing,
    bell_diff_distribution,
    char_distribution,
    fidelity,
    ghz,
    make_sps,
    random_pure,
    random_sps,
)
from .statespec import parse_state_spec

__version__ = "0.1.0"

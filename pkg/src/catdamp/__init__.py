"""catdamp: exact dynamics of multimode entangled coherent states under
photon loss, with concurrence-based entanglement tracking and an independent
truncated Fock-space cross-check."""

from .coherent import (
    CoherentTerm,
    Dyad,
    SuperpositionDensity,
    SuperpositionState,
    apply_loss,
    attach_vacuum,
    beamsplitter,
    canonicalize,
    coherent_overlap,
    density_from_pure,
    density_purity,
    density_spectrum,
    density_trace,
    is_hermitian,
    normalize,
    partial_trace,
    state_inner,
    state_norm,
    tensor,
)
from .logical import (
    LogicalBasis,
    XStateElements,
    make_basis,
    mixture_weights,
    project_to_qubits,
    pure_bipartite_concurrence,
    qubit_coordinates,
    wootters_concurrence,
    xstate_concurrence,
)
from .formulas import (
    ChannelParams,
    concurrence_m,
    concurrence_pure,
    damped_components,
    damped_concurrence_bound,
    damped_state_elements,
    damped_state_projection,
    ghz_damped_elements,
    ghz_damped_projection,
    ghz_one_sided_elements,
    ghz_state,
    mmode_state,
    mode_ladder,
    phase_flip_prob,
    phase_flip_prob_limit,
    phase_flip_prob_m,
    three_mode_state,
)

__version__ = "0.1.0"

__all__ = [
    "CoherentTerm",
    "Dyad",
    "SuperpositionDensity",
    "SuperpositionState",
    "apply_loss",
    "attach_vacuum",
    "beamsplitter",
    "canonicalize",
    "coherent_overlap",
    "density_from_pure",
    "density_purity",
    "density_spectrum",
    "density_trace",
    "is_hermitian",
    "normalize",
    "partial_trace",
    "state_inner",
    "state_norm",
    "tensor",
    "LogicalBasis",
    "XStateElements",
    "make_basis",
    "mixture_weights",
    "project_to_qubits",
    "pure_bipartite_concurrence",
    "qubit_coordinates",
    "wootters_concurrence",
    "xstate_concurrence",
    "ChannelParams",
    "concurrence_m",
    "concurrence_pure",
    "damped_components",
    "damped_concurrence_bound",
    "damped_state_elements",
    "damped_state_projection",
    "ghz_damped_elements",
    "ghz_damped_projection",
    "ghz_one_sided_elements",
    "ghz_state",
    "mmode_state",
    "mode_ladder",
    "phase_flip_prob",
    "phase_flip_prob_limit",
    "phase_flip_prob_m",
    "three_mode_state",
    "__version__",
]

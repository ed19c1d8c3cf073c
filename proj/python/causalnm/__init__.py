"""Causality-monotone non-Markovianity measures for qubit channels."""

from ._causalnm import (
    ADParams,
    ChannelFamily,
    KrausChannel,
    PseudoDensityMatrix,
    QubitState,
    TimeGrid,
    ad_family,
    amplitude_damping,
    causality_F,
    choi_negativity,
    compose,
    damping_r,
    decay_rate,
    decoherence_G,
    f_cm,
    f_curve,
    gad_family,
    generalized_amplitude_damping,
    hcla_measure,
    intermediate_map_witness,
    is_causal,
    nm_measure,
    pdm_from_correlators,
    pdm_k_point,
    pdm_two_point,
    trace_distance_curve,
    unitary_family,
)

__version__ = "0.1.0"

"""Multiqubit coherence under classically correlated Pauli channels."""

from cohchan.channel import (
    ChannelKind,
    CorrelatedChannel,
    PauliString,
    apply_channel,
    apply_phase_flip_fast,
    apply_string,
    dephasing_factor,
    enumerate_strings,
    evolve,
    joint_probability,
    single_qubit_probs,
)
from cohchan.closedform import (
    FROZEN,
    asymptotic_l1_fully_correlated,
    asymptotic_re,
    coefficients,
    epsilon_eigenvalues,
    k_factor,
    l1_phase_flip,
    re_phase_flip,
    reduce_channel,
)
from cohchan.coherence import (
    CoherenceReport,
    coherence_l1,
    coherence_relative_entropy,
    dephase,
    maximally_coherent_state,
    mutual_information,
    normalized,
    report,
    unlocalized_coherence,
)
from cohchan.errors import (
    CohchanError,
    DimensionLimitError,
    EnumerationLimitError,
    NumericalConsistencyError,
    SingularParameterError,
    ValidationError,
)

__version__ = "0.1.0"

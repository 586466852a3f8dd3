"""Leggett-Garg tests of a tilted double well under weak ohmic decoherence."""

from .errors import DomainError, OracleFailure, UsageError
from .kernel import (
    DecoherenceRates,
    PropagatorElements,
    SpectralDensity,
    TransitionMatrix,
    assemble_transition,
    decoherence_rates,
    energy_shifts,
    neglected_term_bound,
    propagator_elements,
    relaxation_rate,
    transition_matrix_paper,
)
from .lgi import (
    CorrelatorSet,
    LgiResult,
    Schedule,
    correlator,
    gamma_from_z,
    k1_assembly,
    k1_paper_closed_form,
    sweep,
    violation_threshold,
    z_from_gamma,
)
from .spectral import ModelParams, ScaleSet, TwoLevelSpectrum, derive_scales, derive_spectrum, isolated_tunneling_prob

__version__ = "0.1.0"

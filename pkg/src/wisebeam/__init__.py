"""Transmit beampattern shaping for colocated MIMO radar.

Designs unimodular waveform sets that concentrate power over a desired
angular sector while honoring a 3 dB beam-width requirement, spectral
stopband masks, and a similarity ball around a reference set.  The main
driver alternates a semidefinite program with per-snapshot
eigendecompositions until the lifted variables collapse to rank one.
"""

from .scenario import Scenario, parse_scenario, validate_scenario, serialize_scenario
from .spatial import (
    steering_vector,
    beampattern,
    build_angle_matrices,
    spatial_islr,
    beamwidth_ratio,
)
from .spectral import stopband_bins, build_selector, spectrum_magnitudes, mask_excess
from .lifting import (
    lift,
    eig_hermitian,
    complex_to_real_psd,
    smallest_m_eigvecs,
    rank_diagnostics,
    extract_rank_one,
)
from .refwave import generate_reference
from .metrics import (
    cross_correlation,
    correlation_level_db,
    similarity_distance,
    constant_modulus_deviation,
    build_metric_bundle,
)
from .wise import run as run_wise, initialize, iterate, RunResult, IterationRecord
from .baselines import sdr_round

__all__ = [
    "Scenario",
    "parse_scenario",
    "validate_scenario",
    "serialize_scenario",
    "steering_vector",
    "beampattern",
    "build_angle_matrices",
    "spatial_islr",
    "beamwidth_ratio",
    "stopband_bins",
    "build_selector",
    "spectrum_magnitudes",
    "mask_excess",
    "lift",
    "eig_hermitian",
    "complex_to_real_psd",
    "smallest_m_eigvecs",
    "rank_diagnostics",
    "extract_rank_one",
    "generate_reference",
    "cross_correlation",
    "correlation_level_db",
    "similarity_distance",
    "constant_modulus_deviation",
    "build_metric_bundle",
    "run_wise",
    "initialize",
    "iterate",
    "RunResult",
    "IterationRecord",
    "sdr_round",
]

__version__ = "0.1.0"

"""Smoothers and predictors for instantaneous phase and frequency estimation.

Filters are designed so that polynomial phase passes through with a chosen
delay while coloured angle noise is attenuated as much as possible. FIR
designs come from whitened polynomial regression; recursive designs weight a
fixed set of first-order responses. An estimator runs alongside a one-step
predictor whose output is used to unwrap each new angle measurement.
"""

__version__ = "0.1.0"

from .analysis import (
    ResponseReport,
    dc_group_delay,
    expected_variance,
    freq_response,
    noise_gains,
    phase_linearity_deviation,
    response_report,
)
from .colouring import coloured_covariance, hpf_impulse, noise_psd, raw_autocorrelation
from .estimators import PhaseTracker, WaveformFrequencyEstimator
from .exceptions import DesignError
from .fir import FirFilter, design_fir
from .harness import CONFIGS, FilterPair, Scenario, ScenarioResult, SystemConfig, run_scenario, threshold_estimate
from .iir import BasisSet, IirFilter, bessel_poles, design_iir
from .realization import LssSystem, TandemFilter, build_lss, run_fir_tandem, run_tandem, steady_state_vector
from .signals import (
    FrequencyTriplet,
    NoiseSpec,
    PhaseSignalSpec,
    UndefinedAngleError,
    conjugate_product_angles,
    synthesize,
    triplet_to_spec,
    wrap,
)
from .specfile import FilterSpec, load_filter_spec, load_scenario

__all__ = [
    "BasisSet",
    "CONFIGS",
    "DesignError",
    "FilterPair",
    "FilterSpec",
    "FirFilter",
    "FrequencyTriplet",
    "IirFilter",
    "LssSystem",
    "NoiseSpec",
    "PhaseSignalSpec",
    "PhaseTracker",
    "ResponseReport",
    "Scenario",
    "ScenarioResult",
    "SystemConfig",
    "TandemFilter",
    "UndefinedAngleError",
    "WaveformFrequencyEstimator",
    "bessel_poles",
    "build_lss",
    "coloured_covariance",
    "conjugate_product_angles",
    "dc_group_delay",
    "design_fir",
    "design_iir",
    "expected_variance",
    "freq_response",
    "hpf_impulse",
    "load_filter_spec",
    "load_scenario",
    "noise_gains",
    "noise_psd",
    "phase_linearity_deviation",
    "raw_autocorrelation",
    "response_report",
    "run_fir_tandem",
    "run_scenario",
    "run_tandem",
    "steady_state_vector",
    "synthesize",
    "threshold_estimate",
    "triplet_to_spec",
    "wrap",
]

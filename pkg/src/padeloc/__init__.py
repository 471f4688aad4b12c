"""Padé-domain bivariate location tests under spherical stable noise."""

from .errors import (
    DegeneracyError,
    DegenerateError,
    DomainError,
    EstimationError,
    NumericalError,
    PadelocError,
    UsageError,
)
from .pade import (
    ComplexObservationSeries,
    PadeParameters,
    extract_pade_parameters,
    pole_transform,
    select_statistic,
)
from .radial import POLE_SCORE, VDW_SCORE, are_pole_vs_vdw, cross_constant
from .rank_test import hotelling_test, location_test, tyler_scatter
from .sim import ExperimentConfig, PowerRow, ks_uniformity_check, pole_shift_experiment, run_power_experiment
from .stable_noise import SignalNoiseModel, StableNoiseSpec, sample_isotropic_stable, sample_series

__version__ = "0.1.0"

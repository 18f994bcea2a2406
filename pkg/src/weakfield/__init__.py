"""Information rates of weak-field homodyne receivers for coherent-state links.

The package computes the click statistics of WH, HL and DW receivers (PNR
detection with a finite, optimizable local oscillator), the mutual information
they achieve under Gaussian, Gamma and BPSK modulation of coherent states over
a lossy bosonic channel, and the closed-form capacity baselines the paper-style
comparisons are made against.
"""

from .baselines import (
    ChannelParams,
    dd_upper_bound,
    find_crossover,
    holevo,
    shannon_dh,
    shannon_sh,
)
from .detectors import (
    DetectorConfig,
    branch_energies,
    dw_distribution,
    gaussian_ensemble_moment,
    hl_difference_moments,
    hl_distribution,
    wh_distribution,
)
from .information import (
    DetectorKind,
    RateResult,
    mutual_information,
    pie,
    ratio_and_gain,
    shannon_entropy,
)
from .modulation import (
    ModulationKind,
    ModulationScheme,
    QuadratureRule,
    build_rule,
    gamma_amplitude_density,
    gaussian_density,
)
from .optimize import OptimizerSettings, optimize_z, optimize_z_nu
from .pnr import ClickProbabilities, log_truncated_poisson, truncated_poisson

__all__ = [
    "ChannelParams",
    "ClickProbabilities",
    "DetectorConfig",
    "DetectorKind",
    "ModulationKind",
    "ModulationScheme",
    "OptimizerSettings",
    "QuadratureRule",
    "RateResult",
    "branch_energies",
    "build_rule",
    "dd_upper_bound",
    "dw_distribution",
    "find_crossover",
    "gamma_amplitude_density",
    "gaussian_density",
    "gaussian_ensemble_moment",
    "hl_difference_moments",
    "hl_distribution",
    "holevo",
    "log_truncated_poisson",
    "mutual_information",
    "optimize_z",
    "optimize_z_nu",
    "pie",
    "ratio_and_gain",
    "shannon_dh",
    "shannon_entropy",
    "shannon_sh",
    "truncated_poisson",
    "wh_distribution",
]

__version__ = "0.1.0"

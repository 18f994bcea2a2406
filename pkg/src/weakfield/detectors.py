"""Outcome statistics of weak-field homodyne receivers for coherent inputs.

Three measurements are modeled.  WH mixes the signal with a local oscillator
(LO) of amplitude ``z`` and phase ``theta`` at a balanced beam splitter and
counts photons on both output arms with PNR(M) detectors, so the outcome is a
pair ``(n1, n2)``.  HL is the same interferometer read out only through the
click difference ``delta = n1 - n2``.  DW splits the signal in two and runs a
WH measurement of each quadrature (theta = 0 and theta = pi/2) with equal LO
energy, producing a 4-tuple ``(n1, n2, m1, m2)``.

Because a product of coherent states stays a product of coherent states under
a beam splitter, every conditional distribution here is a product of truncated
Poisson laws with branch energies ``mu_pm = |alpha +- z e^{i theta}|^2 / 2``.

Distributions are materialized densely: resolutions of interest keep even the
DW array at (M+1)^4 <= 28561 entries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pnr import truncated_poisson_matrix

__all__ = [
    "DetectorConfig",
    "WhOutcomeDistribution",
    "HlOutcomeDistribution",
    "DwOutcomeDistribution",
    "branch_energies",
    "wh_distribution",
    "hl_distribution",
    "dw_distribution",
    "hl_difference_moments",
    "gaussian_ensemble_moment",
]


@dataclass(frozen=True)
class DetectorConfig:
    """One weak-field measurement: PNR resolution, LO amplitude and LO phase.

    ``z`` is in shot-noise units, so the LO energy is ``z**2``.
    """

    M: int
    z: float
    theta: float = 0.0

    def __post_init__(self):
        if not isinstance(self.M, (int, np.integer)) or self.M < 1:
            raise ValueError(f"resolution must be an integer >= 1, got {self.M!r}")
        if not math.isfinite(self.z) or self.z < 0:
            raise ValueError(f"LO amplitude must be finite and >= 0, got {self.z!r}")
        if not 0.0 <= self.theta < math.pi:
            raise ValueError(f"LO phase must lie in [0, pi), got {self.theta!r}")


@dataclass(frozen=True)
class WhOutcomeDistribution:
    """Joint click distribution P(n1, n2), shape (M+1, M+1)."""

    probs: np.ndarray


@dataclass(frozen=True)
class HlOutcomeDistribution:
    """Click-difference distribution S(delta), delta = -M..M, length 2M+1."""

    probs: np.ndarray

    @property
    def deltas(self) -> np.ndarray:
        M = (len(self.probs) - 1) // 2
        return np.arange(-M, M + 1)


@dataclass(frozen=True)
class DwOutcomeDistribution:
    """Joint distribution P(n1, n2, m1, m2), shape (M+1,)*4."""

    probs: np.ndarray


def branch_energies(alpha: complex, cfg: DetectorConfig) -> tuple[float, float]:
    """Mean photon numbers on the two interferometer outputs.

    ``mu_pm = |alpha +- z e^{i theta}|^2 / 2``.
    """
    lo = cfg.z * complex(math.cos(cfg.theta), math.sin(cfg.theta))
    mu_plus = abs(alpha + lo) ** 2 / 2.0
    mu_minus = abs(alpha - lo) ** 2 / 2.0
    return mu_plus, mu_minus


def _branch_energy_arrays(re, im, z, theta):
    """Vectorized branch energies for arrays of signal amplitudes."""
    lo_re = z * math.cos(theta)
    lo_im = z * math.sin(theta)
    mu_plus = ((re + lo_re) ** 2 + (im + lo_im) ** 2) / 2.0
    mu_minus = ((re - lo_re) ** 2 + (im - lo_im) ** 2) / 2.0
    return mu_plus, mu_minus


def wh_conditional_matrix(re, im, z, theta, M) -> np.ndarray:
    """WH conditional distributions for arrays of amplitudes.

    Returns shape ``(len(re), (M+1)**2)`` with the pair index flattened in
    row-major order (n1 slow, n2 fast).
    """
    mu_plus, mu_minus = _branch_energy_arrays(np.asarray(re, float), np.asarray(im, float), z, theta)
    q_plus = truncated_poisson_matrix(mu_plus, M)
    q_minus = truncated_poisson_matrix(mu_minus, M)
    return np.einsum("ki,kj->kij", q_plus, q_minus).reshape(len(q_plus), -1)


def hl_conditional_matrix(re, im, z, theta, M) -> np.ndarray:
    """HL conditional distributions, shape ``(len(re), 2M+1)``, delta = -M..M."""
    pair = wh_conditional_matrix(re, im, z, theta, M).reshape(-1, M + 1, M + 1)
    out = np.empty((pair.shape[0], 2 * M + 1))
    for delta in range(-M, M + 1):
        # n1 - n2 = delta is the -delta offset diagonal of the (n1, n2) matrix
        out[:, delta + M] = np.trace(pair, offset=-delta, axis1=1, axis2=2)
    return out


def dw_conditional_factors(re, im, z, M) -> tuple[np.ndarray, np.ndarray]:
    """The two WH factors of the DW conditional for arrays of amplitudes.

    The signal is halved at a balanced splitter, so each arm sees
    ``alpha / sqrt(2)``; one arm measures at theta = 0, the other at
    theta = pi/2, both with LO amplitude ``z``.  The full DW distribution is
    the outer product of the two returned factors.
    """
    re = np.asarray(re, float) / math.sqrt(2.0)
    im = np.asarray(im, float) / math.sqrt(2.0)
    arm_q = wh_conditional_matrix(re, im, z, 0.0, M)
    arm_p = wh_conditional_matrix(re, im, z, math.pi / 2.0, M)
    return arm_q, arm_p


def wh_distribution(alpha: complex, cfg: DetectorConfig) -> WhOutcomeDistribution:
    """Joint PNR click statistics of a WH measurement on a coherent state."""
    row = wh_conditional_matrix([alpha.real], [alpha.imag], cfg.z, cfg.theta, cfg.M)[0]
    return WhOutcomeDistribution(probs=row.reshape(cfg.M + 1, cfg.M + 1))


def hl_distribution(alpha: complex, cfg: DetectorConfig) -> HlOutcomeDistribution:
    """Click-difference statistics; the exact marginal of ``wh_distribution``."""
    row = hl_conditional_matrix([alpha.real], [alpha.imag], cfg.z, cfg.theta, cfg.M)[0]
    return HlOutcomeDistribution(probs=row)


def dw_distribution(alpha: complex, M: int, z: float) -> DwOutcomeDistribution:
    """Double weak-field homodyne statistics on a coherent state."""
    if not math.isfinite(z) or z < 0:
        raise ValueError(f"LO amplitude must be finite and >= 0, got {z!r}")
    arm_q, arm_p = dw_conditional_factors([alpha.real], [alpha.imag], z, M)
    joint = np.outer(arm_q[0], arm_p[0]).reshape(M + 1, M + 1, M + 1, M + 1)
    return DwOutcomeDistribution(probs=joint)


def hl_difference_moments(cfg: DetectorConfig, alpha: complex, order: int) -> float:
    """Raw moment ``sum_delta delta**order S(delta)`` of the HL outcome."""
    if order not in (1, 2, 3, 4):
        raise ValueError(f"moment order must be in 1..4, got {order!r}")
    dist = hl_distribution(alpha, cfg)
    deltas = dist.deltas.astype(float)
    return float(np.dot(deltas**order, dist.probs))


def gaussian_ensemble_moment(order: int, n_s: float, z2: float) -> float:
    """Analytic moments of the scaled difference current under Gaussian modulation.

    For real amplitudes drawn from a centered Gaussian of variance ``n_s``
    (theta = 0, LO energy ``z2``, unbounded resolution) the click difference is
    a difference of two Poisson variables with means ``(x +- z)^2 / 2``.
    Averaging the exact Skellam moments over the prior gives, with the
    quadrature moments ``<q^2> = 4 n_s + 1`` and ``<q^4> = 48 n_s^2 + 24 n_s + 3``:

        <(D/z)^1> = 0
        <(D/z)^2> = (4 n_s + 1) + n_s / z2
        <(D/z)^3> = 0
        <(D/z)^4> = (48 n_s^2 + 24 n_s + 3)
                    + (9 n_s^2 + n_s) / z2^2 + (72 n_s^2 + 22 n_s + 1) / z2

    The odd moments vanish by symmetry of the prior.  The constant ``1/z2``
    term in the fourth-order correction survives at zero signal and is the
    "non-Gaussian at mesoscopic LO" signature of these receivers.
    """
    if order not in (1, 2, 3, 4):
        raise ValueError(f"moment order must be in 1..4, got {order!r}")
    if n_s < 0 or z2 <= 0:
        raise ValueError("need n_s >= 0 and z2 > 0")
    if order in (1, 3):
        return 0.0
    if order == 2:
        return (4.0 * n_s + 1.0) + n_s / z2
    quad4 = 48.0 * n_s**2 + 24.0 * n_s + 3.0
    return quad4 + (9.0 * n_s**2 + n_s) / z2**2 + (72.0 * n_s**2 + 22.0 * n_s + 1.0) / z2

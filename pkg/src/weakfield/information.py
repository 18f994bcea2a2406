"""Shannon entropies and mutual information of weak-field receivers.

The mutual information of a detector under a modulated coherent-state
ensemble is ``H[p_B] - sum_i w_i H[p(.|x_i)]`` where the marginal ``p_B`` and
the average conditional entropy are taken over a quadrature rule discretizing
the prior.  In the photon-starved regime the result is a small difference of
near-equal entropies, so the marginal is accumulated with compensated
(chunked Kahan) summation in a fixed node order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import baselines
from .detectors import (
    DetectorConfig,
    dw_conditional_factors,
    hl_conditional_matrix,
    wh_conditional_matrix,
)
from .errors import ConfigurationError, NumericError
from .modulation import ModulationScheme, QuadratureRule

__all__ = [
    "DetectorKind",
    "RateResult",
    "shannon_entropy",
    "mutual_information",
    "pie",
    "ratio_and_gain",
]

# Below this mass a probability cannot contribute to any entropy at double
# precision; treat as an exact zero.
_ENTROPY_FLOOR = 1e-300
# Quadrature round-off can leave the information difference slightly negative;
# anything worse than this indicates a bug rather than noise.
_NEGATIVE_TOLERANCE = 1e-9
_MARGINAL_CHUNK = 256


class DetectorKind(str, Enum):
    WH = "wh"
    HL = "hl"
    DW = "dw"


@dataclass(frozen=True)
class RateResult:
    """An achieved information rate and the settings that produced it."""

    bits_per_use: float
    pie_bits_per_photon: float
    z_opt: float
    scheme: ModulationScheme
    detector_kind: DetectorKind
    M: int
    nu_opt: float | None = None

    def __post_init__(self):
        if self.bits_per_use < 0:
            raise ValueError("rates are non-negative")
        if self.scheme.n_s > 0:
            expected = self.bits_per_use / self.scheme.n_s
            if abs(self.pie_bits_per_photon - expected) > 1e-9 * max(1.0, expected):
                raise ValueError("pie must equal bits_per_use / n_s")

    @classmethod
    def from_rate(cls, bits, z_opt, scheme, kind, M, nu_opt=None) -> "RateResult":
        efficiency = bits / scheme.n_s if scheme.n_s > 0 else 0.0
        return cls(bits, efficiency, z_opt, scheme, kind, M, nu_opt)


def _entropy_of_rows(rows: np.ndarray) -> np.ndarray:
    """Shannon entropy (bits) of each row of a matrix of probabilities."""
    clipped = np.where(rows > _ENTROPY_FLOOR, rows, 1.0)
    return -np.sum(np.where(rows > _ENTROPY_FLOOR, rows * np.log2(clipped), 0.0), axis=-1)


def shannon_entropy(dist) -> float:
    """Entropy in bits of a finite probability vector.

    The vector must be non-negative and sum to 1 within 1e-6; small
    normalization drift is divided out before the entropy sum.
    """
    p = np.asarray(dist, dtype=float).ravel()
    if p.size == 0:
        raise ValueError("empty distribution")
    if np.any(p < 0):
        raise ValueError("probabilities must be non-negative")
    total = p.sum()
    if not math.isfinite(total) or abs(total - 1.0) > 1e-6:
        raise ValueError(f"distribution sums to {total!r}, not 1")
    return float(_entropy_of_rows(p[None, :] / total)[0])


def _conditional_matrix(kind: DetectorKind, config: DetectorConfig, rule: QuadratureRule):
    re, im = rule.amplitudes()
    if kind is DetectorKind.WH:
        return wh_conditional_matrix(re, im, config.z, config.theta, config.M), None
    if kind is DetectorKind.HL:
        return hl_conditional_matrix(re, im, config.z, config.theta, config.M), None
    if kind is DetectorKind.DW:
        return dw_conditional_factors(re, im, config.z, config.M)
    raise ConfigurationError(f"unknown detector kind {kind!r}")


def _kahan_combine(total, comp, part):
    y = part - comp
    t = total + y
    comp = (t - total) - y
    return t, comp


def _marginal_single(weights: np.ndarray, cond: np.ndarray) -> np.ndarray:
    """Weighted column sum of ``cond`` with chunked compensated accumulation."""
    total = np.zeros(cond.shape[1])
    comp = np.zeros(cond.shape[1])
    for start in range(0, cond.shape[0], _MARGINAL_CHUNK):
        stop = start + _MARGINAL_CHUNK
        part = weights[start:stop] @ cond[start:stop]
        total, comp = _kahan_combine(total, comp, part)
    return total


def _marginal_product(weights: np.ndarray, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Marginal of a per-node product distribution ``left_k (x) right_k``.

    ``sum_k w_k outer(left_k, right_k)`` is evaluated chunkwise as
    ``(w * left)^T @ right`` with the chunk partials combined by Kahan
    summation in a fixed order.
    """
    d = left.shape[1] * right.shape[1]
    total = np.zeros(d)
    comp = np.zeros(d)
    for start in range(0, left.shape[0], _MARGINAL_CHUNK):
        stop = start + _MARGINAL_CHUNK
        part = ((weights[start:stop, None] * left[start:stop]).T @ right[start:stop]).ravel()
        total, comp = _kahan_combine(total, comp, part)
    return total


def mutual_information(
    kind: DetectorKind,
    config: DetectorConfig,
    scheme: ModulationScheme,
    rule: QuadratureRule,
) -> float:
    """Information rate in bits/use of ``kind`` under the given modulation.

    The DW receiver requires a bi-variate scheme and rule; WH and HL require
    uni-variate ones.  Results within quadrature noise of zero are clamped to
    zero; distinctly negative results raise :class:`NumericError`.
    """
    needs_bivariate = kind is DetectorKind.DW
    if scheme.bivariate != needs_bivariate or rule.bivariate != needs_bivariate:
        raise ConfigurationError(
            f"{kind.value} detection requires "
            f"{'bi' if needs_bivariate else 'uni'}-variate modulation and rule"
        )

    cond, second = _conditional_matrix(kind, config, rule)
    weights = rule.weights
    if second is None:
        marginal = _marginal_single(weights, cond)
        conditional = float(np.dot(weights, _entropy_of_rows(cond)))
    else:
        marginal = _marginal_product(weights, cond, second)
        conditional = float(np.dot(weights, _entropy_of_rows(cond) + _entropy_of_rows(second)))

    info = float(_entropy_of_rows(marginal[None, :])[0]) - conditional
    if not math.isfinite(info):
        raise NumericError(
            "non-finite mutual information",
            where=f"kind={kind.value} M={config.M} z={config.z:.6g} n_s={scheme.n_s:.6g}",
        )
    if info < -_NEGATIVE_TOLERANCE:
        raise NumericError(
            f"mutual information {info} below the quadrature noise floor",
            where=f"kind={kind.value} M={config.M} z={config.z:.6g} n_s={scheme.n_s:.6g}",
        )
    return max(info, 0.0)


def pie(bits_per_use: float, n_s: float) -> float:
    """Photon information efficiency: bits per received photon."""
    if n_s <= 0:
        raise ValueError(f"PIE requires n_s > 0, got {n_s!r}")
    return bits_per_use / n_s


def ratio_and_gain(bits_per_use: float, n_s: float, baseline: str) -> tuple[float, float]:
    """Rate ratio against a capacity baseline, and gain over the DD ceiling.

    ``ratio`` is ``I / C_baseline`` for baseline in {"SH", "DH", "DD"}; the
    gain is always measured against the direct-detection bound,
    ``I / C_DD - 1``.
    """
    if n_s <= 0:
        raise ValueError(f"baseline comparison requires n_s > 0, got {n_s!r}")
    curves = {
        "SH": baselines.shannon_sh,
        "DH": baselines.shannon_dh,
        "DD": baselines.dd_upper_bound,
    }
    try:
        reference = curves[baseline.upper()]
    except KeyError:
        raise ConfigurationError(f"unknown baseline {baseline!r}") from None
    denom = reference(n_s)
    if denom == 0.0:
        raise ValueError(f"baseline capacity vanishes at n_s={n_s!r}")
    return bits_per_use / denom, bits_per_use / baselines.dd_upper_bound(n_s) - 1.0

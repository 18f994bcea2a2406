"""Click statistics of a photon-number-resolving detector with finite resolution.

A PNR(M) detector reports the exact photon count for 0..M-1 photons and lumps
every event with M or more photons into the saturation outcome M.  For a
coherent field of mean energy ``mu`` the count distribution is a truncated
Poisson law: the first M entries are Poisson masses and the last entry is the
complementary tail.

All Poisson terms are evaluated in log space against a precomputed
log-factorial table, so large ``mu`` and large ``M`` neither overflow nor lose
the tail to cancellation.  The tail itself is formed as the complement of a
compensated cumulative sum and clamped to [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ClickProbabilities",
    "truncated_poisson",
    "truncated_poisson_matrix",
    "log_truncated_poisson",
    "LOG_FACTORIAL_CAP",
]

# Largest count for which log(n!) is tabulated.  M beyond this raises, which
# is far above any physically sensible resolution (M <= 60 in practice).
LOG_FACTORIAL_CAP = 512

_LOG_FACTORIAL = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, LOG_FACTORIAL_CAP + 1)))))


def _check_resolution(M: int) -> int:
    if not isinstance(M, (int, np.integer)) or M < 1:
        raise ValueError(f"PNR resolution must be an integer >= 1, got {M!r}")
    if M > LOG_FACTORIAL_CAP:
        raise ValueError(f"PNR resolution {M} exceeds the log-factorial cap {LOG_FACTORIAL_CAP}")
    return int(M)


@dataclass(frozen=True)
class ClickProbabilities:
    """Distribution over the M+1 outcomes of one PNR(M) detector.

    ``probs[n]`` is the probability of reporting n clicks; ``mean_energy`` is
    the mean photon number of the impinging field.
    """

    probs: np.ndarray
    mean_energy: float

    @property
    def resolution(self) -> int:
        return len(self.probs) - 1


def truncated_poisson_matrix(mus: np.ndarray, M: int) -> np.ndarray:
    """Truncated Poisson rows for an array of mean energies.

    Returns an array of shape ``(len(mus), M+1)`` whose row i is the click
    distribution at mean energy ``mus[i]``.  This is the vectorized kernel
    behind all conditional outcome distributions.
    """
    M = _check_resolution(M)
    mus = np.asarray(mus, dtype=float)
    if mus.ndim != 1:
        raise ValueError("mus must be one-dimensional")
    if not np.all(np.isfinite(mus)) or np.any(mus < 0):
        raise ValueError("mean energies must be finite and non-negative")

    n = np.arange(M + 1)
    safe = np.where(mus > 0.0, mus, 1.0)
    logp = -mus[:, None] + n[None, :] * np.log(safe)[:, None] - _LOG_FACTORIAL[: M + 1][None, :]
    probs = np.exp(logp)
    zero = mus == 0.0
    if np.any(zero):
        probs[zero] = 0.0
        probs[zero, 0] = 1.0
    # Saturation outcome as the complement of a compensated partial sum; the
    # carried compensation term pushes the resolvable tail down to ~1e-32.
    total, comp = _compensated_row_sum(probs[:, :M])
    tail = np.clip((1.0 - total) - comp, 0.0, 1.0)
    # Deeper tails are formed by direct forward summation of the Poisson
    # series, which stays relatively accurate at any magnitude.
    deep = tail < 1e-10
    if np.any(deep):
        tail[deep] = [_poisson_tail(mu, M) for mu in mus[deep]]
    probs[:, M] = tail
    return probs


def _compensated_row_sum(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Kahan-compensated sum along axis 1, returning (total, compensation)."""
    total = np.zeros(rows.shape[0])
    comp = np.zeros(rows.shape[0])
    for j in range(rows.shape[1]):
        y = rows[:, j] - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total, comp


def _poisson_tail(mu: float, M: int) -> float:
    """P(N >= M) for N ~ Poisson(mu) by forward series from the M-th mass."""
    if mu == 0.0:
        return 0.0
    log_first = -mu + M * math.log(mu) - _LOG_FACTORIAL[M]
    if log_first < -745.0:  # below exp underflow
        return 0.0
    term = math.exp(log_first)
    total = term
    n = M + 1
    while n < M + 400:
        term *= mu / n
        total += term
        if term < total * 1e-18:
            break
        n += 1
    return min(total, 1.0)


def truncated_poisson(mu: float, M: int) -> ClickProbabilities:
    """Click distribution of a PNR(M) detector illuminated with mean energy mu."""
    if not math.isfinite(mu) or mu < 0:
        raise ValueError(f"mean energy must be finite and non-negative, got {mu!r}")
    probs = truncated_poisson_matrix(np.array([mu]), M)[0]
    return ClickProbabilities(probs=probs, mean_energy=float(mu))


def log_truncated_poisson(mu: float, M: int, n: int) -> float:
    """Base-2 log of the click probability q_n(mu).

    Returns ``-inf`` when the probability is exactly zero; entropy
    accumulation treats that sentinel as a vanishing contribution.
    """
    M = _check_resolution(M)
    if not isinstance(n, (int, np.integer)) or n < 0 or n > M:
        raise ValueError(f"outcome index must be in [0, {M}], got {n!r}")
    if not math.isfinite(mu) or mu < 0:
        raise ValueError(f"mean energy must be finite and non-negative, got {mu!r}")
    if n < M:
        if mu == 0.0:
            return 0.0 if n == 0 else -math.inf
        logp = -mu + n * math.log(mu) - _LOG_FACTORIAL[n]
        return logp / math.log(2.0)
    q_tail = truncated_poisson(mu, M).probs[M]
    if q_tail <= 0.0:
        return -math.inf
    return math.log2(q_tail)

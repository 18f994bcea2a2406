"""Closed-form capacity baselines for coherent-state communication.

All curves are functions of the mean received energy per channel use ``n_s``
(photons/use); after a pure-loss channel of transmissivity ``tau`` this is
``tau * n_bar`` with ``n_bar`` the mean input energy.

* ``shannon_sh``: single-quadrature (homodyne) Gaussian capacity,
  ``log2(1 + 4 n_s) / 2``.
* ``shannon_dh``: double-quadrature (heterodyne) Gaussian capacity,
  ``log2(1 + n_s)``.
* ``holevo``: the ultimate quantum rate ``g(n_s)`` with
  ``g(x) = (x+1) log2(x+1) - x log2 x``.
* ``dd_upper_bound``: the sharpest known closed-form ceiling on the
  direct-detection (discrete-time Poisson) capacity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BracketError

__all__ = [
    "ChannelParams",
    "shannon_sh",
    "shannon_dh",
    "holevo",
    "dd_upper_bound",
    "find_crossover",
    "EULER_GAMMA",
]

EULER_GAMMA = 0.57721566490153286


@dataclass(frozen=True)
class ChannelParams:
    """Pure-loss channel bookkeeping: received energy is ``tau * n_bar``."""

    tau: float
    n_bar: float

    def __post_init__(self):
        if not 0.0 < self.tau <= 1.0:
            raise ValueError(f"transmissivity must be in (0, 1], got {self.tau!r}")
        if self.n_bar < 0:
            raise ValueError(f"mean input energy must be >= 0, got {self.n_bar!r}")

    @property
    def n_s(self) -> float:
        return self.tau * self.n_bar


def _check_energy(n_s: float) -> float:
    if not math.isfinite(n_s) or n_s < 0:
        raise ValueError(f"mean energy must be finite and >= 0, got {n_s!r}")
    return float(n_s)


def shannon_sh(n_s: float) -> float:
    """Single-homodyne Gaussian capacity in bits/use."""
    n_s = _check_energy(n_s)
    return 0.5 * math.log2(1.0 + 4.0 * n_s)


def shannon_dh(n_s: float) -> float:
    """Double-homodyne Gaussian capacity in bits/use."""
    n_s = _check_energy(n_s)
    return math.log2(1.0 + n_s)


def holevo(n_s: float) -> float:
    """Holevo capacity ``g(n_s)``, with the removable singularity g(0) = 0."""
    n_s = _check_energy(n_s)
    if n_s == 0.0:
        return 0.0
    return (n_s + 1.0) * math.log2(n_s + 1.0) - n_s * math.log2(n_s)

def dd_upper_bound(n_s: float) -> float:
    """Upper bound on the direct-detection capacity, bits/use.

    The expression carries an ``n_s log(1/n_s)`` structure with limit 0 at the
    origin but divides by zero there, so the domain is n_s > 0.
    """
    n_s = _check_energy(n_s)
    if n_s <= 0.0:
        raise ValueError("the direct-detection bound requires n_s > 0")
    e_gamma = math.exp(1.0 + EULER_GAMMA)
    top = 1.0 + (1.0 + e_gamma) * n_s + 2.0 * n_s**2
    bottom = e_gamma * n_s + 2.0 * n_s**2
    rate = n_s * math.log2(top / bottom)
    rate += math.log2(1.0 + (math.sqrt(top / (1.0 + n_s)) - 1.0) / math.sqrt(2.0 * math.e))
    return rate


def find_crossover(f, g, bracket: tuple[float, float], tol: float = 1e-4) -> float:
    """Root of ``f - g`` on ``bracket`` by bisection, to ``tol`` in n_s.

    Raises :class:`BracketError` when the difference does not change sign.
    """
    lo, hi = bracket
    if not lo < hi:
        raise BracketError(f"invalid bracket {bracket!r}")
    d_lo = f(lo) - g(lo)
    d_hi = f(hi) - g(hi)
    if d_lo == 0.0:
        return lo
    if d_hi == 0.0:
        return hi
    if (d_lo > 0) == (d_hi > 0):
        raise BracketError(f"no sign change of f - g on {bracket!r}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        d_mid = f(mid) - g(mid)
        if d_mid == 0.0:
            return mid
        if (d_mid > 0) == (d_lo > 0):
            lo, d_lo = mid, d_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)

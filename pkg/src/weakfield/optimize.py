"""Derivative-free maximization of the information rate over the LO energy.

The objective ``I(z)`` carries no unimodality guarantee, so the search is a
coarse scan over a logarithmic grid in ``z**2`` followed by golden-section
refinement around the best few scan points.  The optimum spans decades as the
signal energy varies, hence the log parameterization.

For non-Gaussian modulation the free Gamma shape ``nu`` is optimized jointly
by running the LO search at every candidate in a fixed ``nu`` grid; BPSK is a
grid member in its own right (the exact two-point prior), not a large-``nu``
stand-in that quadrature would misresolve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .detectors import DetectorConfig
from .errors import NumericError
from .information import DetectorKind, mutual_information
from .modulation import ModulationKind, ModulationScheme, QuadratureRule, build_rule

__all__ = ["OptimizerSettings", "optimize_z", "optimize_z_nu", "default_nu_grid"]

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
# Shape candidates within this relative margin of the best rate are treated
# as degenerate; the starved-regime rate is flat in nu to far better than any
# physically meaningful resolution.
_NU_SELECTION_RTOL = 1e-4


def default_nu_grid() -> tuple[float, ...]:
    """Gaussian first, 25 log-spaced shapes, then the BPSK limit point."""
    return (0.5, *np.logspace(math.log10(0.6), 3.0, 25), math.inf)


@dataclass(frozen=True)
class OptimizerSettings:
    z2_min: float = 1e-6
    z2_max: float = 1e2
    coarse_points: int = 25
    refine_tol: float = 1e-3
    nu_grid: tuple[float, ...] = field(default_factory=default_nu_grid)

    def __post_init__(self):
        if not 0 < self.z2_min < self.z2_max:
            raise ValueError("need 0 < z2_min < z2_max")
        if self.refine_tol <= 0:
            raise ValueError("refine_tol must be positive")
        if self.coarse_points < 3:
            raise ValueError("coarse_points must be >= 3")


class _Probed:
    """Objective wrapper tracking the best probed point."""

    def __init__(self, objective):
        self._objective = objective
        self.best_log_z2 = None
        self.best_value = -math.inf

    def __call__(self, log_z2: float) -> float:
        value = self._objective(math.exp(log_z2))
        if not math.isfinite(value):
            raise NumericError("non-finite rate objective", where=f"z2={math.exp(log_z2):.6g}")
        if value > self.best_value:
            self.best_value = value
            self.best_log_z2 = log_z2
        return value


def _golden_refine(probe: _Probed, lo: float, hi: float, tol: float) -> None:
    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    fc, fd = probe(c), probe(d)
    while hi - lo > tol:
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_PHI * (hi - lo)
            fc = probe(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_PHI * (hi - lo)
            fd = probe(d)


def _optimize_log_objective(objective, settings: OptimizerSettings, starts: int = 3):
    probe = _Probed(objective)
    grid = np.linspace(math.log(settings.z2_min), math.log(settings.z2_max), settings.coarse_points)
    values = np.array([probe(g) for g in grid])
    tol = math.log1p(settings.refine_tol)
    order = np.argsort(values)[::-1][:starts]
    for index in sorted(order):
        lo = grid[max(index - 1, 0)]
        hi = grid[min(index + 1, len(grid) - 1)]
        if hi > lo:
            _golden_refine(probe, lo, hi, tol)
    return math.exp(probe.best_log_z2), probe.best_value


def optimize_z(
    kind: DetectorKind,
    M: int,
    scheme: ModulationScheme,
    rule: QuadratureRule,
    settings: OptimizerSettings = OptimizerSettings(),
    theta: float = 0.0,
) -> tuple[float, float]:
    """Maximize the information rate over the LO amplitude.

    Returns ``(z_opt, bits_per_use)``.  ``z_opt`` is always a probed point and
    the returned rate is its evaluated objective, so re-evaluation reproduces
    the optimum exactly; the result is never below the coarse-scan maximum.
    """

    def objective(z2: float) -> float:
        config = DetectorConfig(M=M, z=math.sqrt(z2), theta=theta)
        return mutual_information(kind, config, scheme, rule)

    z2_opt, value = _optimize_log_objective(objective, settings)
    return math.sqrt(z2_opt), value


def optimize_z_nu(
    M: int,
    n_s: float,
    settings: OptimizerSettings = OptimizerSettings(),
    node_count: int = 64,
) -> tuple[float, float, float]:
    """Joint LO and modulation-shape optimization for single-quadrature WH.

    Every ``nu`` in the settings grid is tried (``inf`` meaning BPSK, 0.5
    evaluated as the exactly-equivalent Gaussian prior) and a best
    ``(z_opt, nu_opt, bits_per_use)`` triple is returned.  Since 0.5 is always
    a candidate, the returned rate is never below the Gaussian-modulation one.

    The rate profile over ``nu`` is numerically flat in places (in the starved
    regime every shape performs identically to far better than quadrature
    resolution, and near the BPSK regime the large-shape tail of the grid
    converges onto the two-point limit), so a raw argmax would report noise.
    Within a small relative band of the maximum the selection prefers the
    canonical representatives: the Gaussian shape 0.5 when it is in the band,
    else the exact BPSK limit, else the argmax itself.
    """
    candidates = []
    for nu in settings.nu_grid:
        if math.isinf(nu):
            scheme = ModulationScheme(ModulationKind.BPSK_UNI, n_s)
        elif nu == 0.5:
            scheme = ModulationScheme(ModulationKind.GAUSSIAN_UNI, n_s)
        else:
            scheme = ModulationScheme(ModulationKind.GAMMA_UNI, n_s, nu=nu)
        rule = build_rule(scheme, node_count)
        z_opt, value = optimize_z(DetectorKind.WH, M, scheme, rule, settings)
        candidates.append((z_opt, nu, value))

    top = max(candidate[2] for candidate in candidates)
    floor = top - _NU_SELECTION_RTOL * max(abs(top), 1e-12)
    in_band = [candidate for candidate in candidates if candidate[2] >= floor]
    for representative in (0.5, math.inf):
        for candidate in in_band:
            if candidate[1] == representative:
                return candidate
    return max(candidates, key=lambda candidate: candidate[2])

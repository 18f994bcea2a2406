"""Figure layout registry.

Every supported figure id maps to the axis scales, labels and panel stacking
used to replicate the reference layouts.  The input CSV slices share one
schema: ``panel,x,series,y`` with one row per plotted point.
"""

from __future__ import annotations

from dataclasses import dataclass, field

SLICE_COLUMNS = ("panel", "x", "series", "y")


@dataclass(frozen=True)
class PanelSpec:
    name: str
    ylabel: str
    xscale: str = "log"
    yscale: str = "linear"


@dataclass(frozen=True)
class FigureSpec:
    figure_id: int
    title: str
    xlabel: str
    panels: tuple[PanelSpec, ...]
    # series drawn with dashed lines (reference/baseline curves)
    dashed_prefixes: tuple[str, ...] = field(default=("C_", "P_SH", "P_DH", "G_SH", "G_DH"))


FIGURES: dict[int, FigureSpec] = {
    1: FigureSpec(
        1,
        "Capacity baselines",
        "mean received energy n_S (photons/use)",
        (PanelSpec("capacity", "capacity (bits/use)"),),
    ),
    4: FigureSpec(
        4,
        "Single-quadrature rates and ratios",
        "mean received energy n_S (photons/use)",
        (
            PanelSpec("rate", "information rate (bits/use)"),
            PanelSpec("ratio", "rate / C_SH"),
        ),
    ),
    5: FigureSpec(
        5,
        "Photon information efficiency and optimized LO",
        "mean received energy n_S (photons/use)",
        (
            PanelSpec("pie", "PIE (bits/photon)", yscale="log"),
            PanelSpec("lo", "optimized LO energy z^2", yscale="log"),
        ),
    ),
    6: FigureSpec(
        6,
        "Single vs double weak-field rates and ratios",
        "mean received energy n_S (photons/use)",
        (
            PanelSpec("rate", "information rate (bits/use)"),
            PanelSpec("ratio", "rate / Shannon baseline"),
        ),
    ),
    7: FigureSpec(
        7,
        "Gain over the direct-detection bound",
        "mean received energy n_S (photons/use)",
        (
            PanelSpec("wh", "gain G_WH"),
            PanelSpec("dw", "gain G_DW"),
        ),
    ),
    8: FigureSpec(
        8,
        "PIE of single and double weak-field detection",
        "mean received energy n_S (photons/use)",
        (PanelSpec("pie", "PIE (bits/photon)", yscale="log"),),
    ),
    9: FigureSpec(
        9,
        "Non-Gaussian amplitude densities at n_S = 4",
        "coherent amplitude",
        (PanelSpec("density", "probability density", xscale="linear"),),
    ),
    10: FigureSpec(
        10,
        "Optimized modulation shape",
        "mean received energy n_S (photons/use)",
        (PanelSpec("nu", "optimal shape parameter"),),
    ),
    11: FigureSpec(
        11,
        "Gaussian vs optimized non-Gaussian modulation",
        "mean received energy n_S (photons/use)",
        (
            PanelSpec("ratio", "rate / C_SH"),
            PanelSpec("gain", "gain over C_DD"),
        ),
    ),
}

SUPPORTED_IDS = tuple(sorted(FIGURES))

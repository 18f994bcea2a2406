"""Rendering of figure slices.

A slice CSV (``panel,x,series,y``) is loaded into per-panel series and drawn
with the layout from the figure registry.  Rendering is a pure function of
the CSV contents: no physics is recomputed here.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .specs import FIGURES, SLICE_COLUMNS, FigureSpec


class SchemaError(ValueError):
    """The input slice is empty or lacks required columns."""


def load_slice(path) -> dict[str, dict[str, tuple[list[float], list[float]]]]:
    """Parse a slice CSV into {panel: {series: (x, y)}} preserving row order."""
    path = Path(path)
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None:
            raise SchemaError(f"{path.name}: empty CSV")
        missing = [name for name in SLICE_COLUMNS if name not in reader.fieldnames]
        if missing:
            raise SchemaError(f"{path.name}: missing columns {missing}")
        panels: dict[str, dict[str, tuple[list[float], list[float]]]] = {}
        for record in reader:
            series = panels.setdefault(record["panel"], {}).setdefault(record["series"], ([], []))
            series[0].append(float(record["x"]))
            series[1].append(float(record["y"]))
    if not panels:
        raise SchemaError(f"{path.name}: no data rows")
    return panels


def _draw_series(axis, spec: FigureSpec, name: str, x, y):
    dashed = any(name.startswith(prefix) for prefix in spec.dashed_prefixes)
    finite = [(a, b) for a, b in zip(x, y) if math.isfinite(b)]
    style = dict(linestyle="--" if dashed else "-", linewidth=1.2 if dashed else 1.6)
    if finite:
        axis.plot([a for a, _ in finite], [b for _, b in finite], label=name, **style)
    markers = [(a, b) for a, b in zip(x, y) if math.isinf(b)]
    if markers:
        # infinite values mark the two-point (BPSK) limit; pin them to a
        # visible level above the finite data
        top = max((b for _, b in finite), default=1.0)
        level = top * 2.0 if top > 0 else 1.0
        axis.plot(
            [a for a, _ in markers],
            [level] * len(markers),
            linestyle="none",
            marker="^",
            label=f"{name} (BPSK limit)",
        )
        axis.axhline(level, color="0.6", linewidth=0.6, linestyle=":")


def build_figure(figure_id: int, panels_data) -> plt.Figure:
    """Assemble the matplotlib figure for ``figure_id`` from loaded slice data."""
    spec = FIGURES[figure_id]
    fig, axes = plt.subplots(
        len(spec.panels), 1, figsize=(6.4, 3.6 * len(spec.panels)), squeeze=False
    )
    for axis, panel in zip(axes[:, 0], spec.panels):
        data = panels_data.get(panel.name, {})
        for name in sorted(data):
            x, y = data[name]
            _draw_series(axis, spec, name, x, y)
        axis.set_xscale(panel.xscale)
        axis.set_yscale(panel.yscale)
        axis.set_xlabel(spec.xlabel)
        axis.set_ylabel(panel.ylabel)
        axis.grid(True, alpha=0.3)
        if data:
            axis.legend(fontsize=7, ncols=2)
    axes[0, 0].set_title(spec.title)
    fig.tight_layout()
    return fig


def render(figure_id: int, csv_path, out_path) -> Path:
    """Render one slice CSV to an image file; returns the written path."""
    if figure_id not in FIGURES:
        raise SchemaError(f"unsupported figure id {figure_id}")
    panels_data = load_slice(csv_path)
    fig = build_figure(figure_id, panels_data)
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path)
    plt.close(fig)
    return out_path

"""Figure renderer for weakfield CSV slices."""

from .render import SchemaError, build_figure, load_slice, render
from .specs import FIGURES, SUPPORTED_IDS, FigureSpec, PanelSpec

__all__ = [
    "FIGURES",
    "FigureSpec",
    "PanelSpec",
    "SUPPORTED_IDS",
    "SchemaError",
    "build_figure",
    "load_slice",
    "render",
]

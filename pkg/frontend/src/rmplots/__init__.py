"""FER plot and table rendering for the decoding workbench."""

from .render import PlotSpec, RenderError, kb, render_fer, render_tables, sci

__all__ = ["PlotSpec", "RenderError", "render_fer", "render_tables", "sci", "kb"]

"""Render log-log convergence figures from sweep CSV files.

Consumes only the sweep CSV schema

    family,n,eps,trial,distance,gnorm1,gnorm2,diag_resid,spec_resid,status

and recomputes the distance slope per family from the raw rows, giving an
independent check on whatever produced the file.
"""

from .render import EmptyData, PlotSpec, SchemaMismatch, SweepRows, load_rows, render_sweep_plot

__all__ = [
    "PlotSpec",
    "SweepRows",
    "SchemaMismatch",
    "EmptyData",
    "load_rows",
    "render_sweep_plot",
]

__version__ = "0.1.0"

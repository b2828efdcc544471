"""Figures rendered from sweep CSVs."""
from .plotting import plot_csv, plot_rows

__all__ = ["plot_csv", "plot_rows"]

"""Probabilistic amplitude shaping with enumerative sphere shaping and CCDM."""

__version__ = "0.1.0"

"""Achievable-rate and effective-SNR estimators."""
from .estimators import (
    DIMS_4D,
    air_n,
    batch_means,
    bit_entropy_terms,
    bmd_rate,
    coded_bit_entropy,
    conditional_entropy_bmd,
    effective_snr,
    reach_at_air,
    snr_batch_ci,
)
from .report import CSV_COLUMNS, MetricsReport, evaluate

__all__ = [
    "CSV_COLUMNS",
    "DIMS_4D",
    "MetricsReport",
    "air_n",
    "batch_means",
    "bit_entropy_terms",
    "bmd_rate",
    "coded_bit_entropy",
    "conditional_entropy_bmd",
    "effective_snr",
    "evaluate",
    "reach_at_air",
    "snr_batch_ci",
]

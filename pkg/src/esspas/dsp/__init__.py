"""Pulse shaping and the receiver DSP chain."""
from .compensation import PhaseCorrection, align, cd_compensate, genie_phase_correct, least_squares_gain
from .filters import (
    AlignmentError,
    RrcFilter,
    downsample_to,
    matched_filter_and_decimate,
    pulse_shape,
    rrc_taps,
    scale_power,
)
from .link import receive_symbols, transmit_waveform

__all__ = [
    "AlignmentError",
    "PhaseCorrection",
    "RrcFilter",
    "align",
    "cd_compensate",
    "downsample_to",
    "genie_phase_correct",
    "least_squares_gain",
    "matched_filter_and_decimate",
    "pulse_shape",
    "receive_symbols",
    "rrc_taps",
    "scale_power",
    "transmit_waveform",
]

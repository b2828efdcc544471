"""Stochastic channels: AWGN and multi-span dual-polarization fiber with EDFAs."""
from .amplifier import OSNR_REFERENCE_BANDWIDTH, AmplifierParams, ase_psd, edfa, osnr_db
from .awgn import awgn
from .fiber import (
    FiberParams,
    apply_dispersion,
    dispersion_memory,
    pad_guard,
    propagate_link,
    ssfm_span,
    step_schedule,
)
from .waveform import DEFAULT_CENTER_FREQUENCY, Waveform, dump_waveform, load_waveform
from .wdm import AliasingError, WdmConfig, brickwall, wdm_mux, wdm_select

__all__ = [
    "AliasingError",
    "AmplifierParams",
    "DEFAULT_CENTER_FREQUENCY",
    "FiberParams",
    "OSNR_REFERENCE_BANDWIDTH",
    "Waveform",
    "WdmConfig",
    "apply_dispersion",
    "ase_psd",
    "awgn",
    "brickwall",
    "dispersion_memory",
    "dump_waveform",
    "edfa",
    "load_waveform",
    "osnr_db",
    "pad_guard",
    "propagate_link",
    "ssfm_span",
    "step_schedule",
    "wdm_mux",
    "wdm_select",
]

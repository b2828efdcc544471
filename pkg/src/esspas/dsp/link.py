"""Transmitter front end and receiver DSP chain around a channel."""
from __future__ import annotations

import math
from typing import Optional

import numpy as np

from ..channel.fiber import FiberParams, dispersion_memory, pad_guard
from ..channel.waveform import Waveform
from ..channel.wdm import WdmConfig, wdm_select
from .compensation import cd_compensate
from .filters import RrcFilter, downsample_to, matched_filter_and_decimate, pulse_shape, scale_power


def transmit_waveform(symbols, symbol_rate: float, sps: int = 16, rrc: Optional[RrcFilter] = None,
                      power_w: Optional[float] = None, fiber: Optional[FiberParams] = None,
                      distance_km: float = 0.0) -> Waveform:
    """Pulse-shape ``(2, n)`` symbols, set the launch power and add a dispersion guard.

    ``power_w`` is the mean launch power over the symbol block (both
    polarizations). The guard, a whole number of symbols of zeros on each
    side, absorbs the dispersion spread of the occupied band so FFT-based
    propagation does not wrap around.
    """
    rrc = rrc or RrcFilter()
    wave = pulse_shape(symbols, symbol_rate, sps, rrc)
    if power_w is not None:
        sym_power = float(np.mean(np.sum(np.abs(np.asarray(symbols)) ** 2, axis=0)))
        wave = scale_power(wave, power_w, reference=sym_power)
    if fiber is not None and distance_km > 0:
        bw = symbol_rate * (1 + rrc.roll_off)
        guard = dispersion_memory(fiber.beta2, distance_km, wave.sample_rate, bw)
        wave = pad_guard(wave, int(math.ceil(guard / sps)) * sps)
    return wave


def receive_symbols(wave: Waveform, n_symbols: int, fiber: Optional[FiberParams] = None,
                    distance_km: float = 0.0, rx_sps: int = 2, rrc: Optional[RrcFilter] = None,
                    wdm: Optional[WdmConfig] = None, channel_index: Optional[int] = None) -> np.ndarray:
    """Channel select, downsample, CD-compensate, matched filter; returns ``(2, n_symbols)``."""
    if wdm is not None:
        wave = wdm_select(wave, wdm.center_index if channel_index is None else channel_index, wdm)
    wave = downsample_to(wave, rx_sps)
    if fiber is not None and distance_km:
        wave = cd_compensate(wave, fiber, distance_km)
    return matched_filter_and_decimate(wave, n_symbols, rrc)

"""Frequency-division multiplexing of independently modulated channels."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import fft as sfft

from .waveform import Waveform


class AliasingError(ValueError):
    """Sample rate too low for the requested WDM comb."""


@dataclass(frozen=True)
class WdmConfig:
    channel_count: int = 11
    spacing: float = 50e9
    symbol_rate: float = 45e9
    roll_off: float = 0.1

    def __post_init__(self):
        if self.channel_count < 1:
            raise ValueError("need at least one channel")
        if self.spacing < self.symbol_rate * (1 + self.roll_off) * (1 - 1e-12):
            raise ValueError(
                f"spacing {self.spacing:g} Hz below occupied bandwidth "
                f"{self.symbol_rate * (1 + self.roll_off):g} Hz"
            )

    @property
    def center_index(self) -> int:
        return self.channel_count // 2

    def offsets(self) -> np.ndarray:
        return (np.arange(self.channel_count) - (self.channel_count - 1) / 2) * self.spacing

    @property
    def total_bandwidth(self) -> float:
        return self.channel_count * self.spacing


def _shift(samples: np.ndarray, freq: float, sample_rate: float) -> np.ndarray:
    n = samples.shape[-1]
    return samples * np.exp(2j * np.pi * freq * np.arange(n) / sample_rate)


def check_sample_rate(config: WdmConfig, sample_rate: float) -> None:
    edge = np.max(np.abs(config.offsets())) + config.spacing / 2
    if edge > sample_rate / 2 * (1 + 1e-12):
        raise AliasingError(
            f"WDM comb reaches {edge:g} Hz but Nyquist is {sample_rate / 2:g} Hz; "
            f"need at least {2 * edge:g} samples/s"
        )


def wdm_mux(channels: Sequence[Waveform], config: WdmConfig) -> Waveform:
    """Shift channel ``i`` to its comb offset and sum."""
    if len(channels) != config.channel_count:
        raise ValueError(f"expected {config.channel_count} channels, got {len(channels)}")
    ref = channels[0]
    for ch in channels:
        if ch.sample_rate != ref.sample_rate or len(ch) != len(ref):
            raise ValueError("channels must share sample rate and length")
    check_sample_rate(config, ref.sample_rate)
    total = np.zeros_like(ref.samples, dtype=complex)
    for ch, f in zip(channels, config.offsets()):
        total += _shift(ch.samples, f, ref.sample_rate)
    return ref.with_samples(total)


def brickwall(samples: np.ndarray, sample_rate: float, bandwidth: float) -> np.ndarray:
    """Zero every bin with ``|f| > bandwidth / 2``."""
    f = sfft.fftfreq(samples.shape[-1], 1 / sample_rate)
    S = sfft.fft(samples, axis=-1)
    S[..., np.abs(f) > bandwidth / 2] = 0
    return sfft.ifft(S, axis=-1)


def wdm_select(wave: Waveform, channel_index: int, config: WdmConfig) -> Waveform:
    """Bring channel ``channel_index`` to baseband and brick-wall filter to the spacing."""
    if not 0 <= channel_index < config.channel_count:
        raise IndexError(f"channel {channel_index} outside 0..{config.channel_count - 1}")
    check_sample_rate(config, wave.sample_rate)
    base = _shift(wave.samples, -config.offsets()[channel_index], wave.sample_rate)
    return wave.with_samples(brickwall(base, wave.sample_rate, config.spacing))

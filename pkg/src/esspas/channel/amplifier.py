"""Lumped EDFA with white ASE and the matching OSNR bookkeeping."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.constants import h as PLANCK

from .waveform import Waveform

OSNR_REFERENCE_BANDWIDTH = 12.5e9  # 0.1 nm at 1550 nm


@dataclass(frozen=True)
class AmplifierParams:
    """Gain and noise figure in dB. ``noise=False`` gives a noiseless amplifier."""

    gain: float = 16.0
    noise_figure: float = 5.0
    noise: bool = True

    def __post_init__(self):
        if self.gain < 0:
            raise ValueError("EDFA gain must be >= 0 dB")

    @property
    def gain_lin(self) -> float:
        return 10 ** (self.gain / 10)

    @property
    def n_sp(self) -> float:
        return 10 ** (self.noise_figure / 10) / 2


def ase_psd(amp: AmplifierParams, frequency: float) -> float:
    """One-sided ASE PSD per polarization, W/Hz: ``(G-1) h nu n_sp``."""
    if not amp.noise:
        return 0.0
    return (amp.gain_lin - 1) * PLANCK * frequency * amp.n_sp


def edfa(wave: Waveform, amp: AmplifierParams, rng_seed=None) -> Waveform:
    """Amplify by ``sqrt(G)`` and add ASE over the full simulation bandwidth."""
    out = wave.samples * np.sqrt(amp.gain_lin)
    psd = ase_psd(amp, wave.center_frequency)
    if psd > 0:
        var = psd * wave.sample_rate  # per polarization, complex
        rng = np.random.default_rng(rng_seed)
        noise = rng.standard_normal((2,) + out.shape)
        out = out + np.sqrt(var / 2) * (noise[0] + 1j * noise[1])
    return wave.with_samples(out)


def osnr_db(signal_power: float, amp: AmplifierParams, frequency: float, n_amplifiers: int = 1,
            reference_bandwidth: float = OSNR_REFERENCE_BANDWIDTH) -> float:
    """Closed-form OSNR: ``P / (N_amp * 2 * PSD_pol * B_ref)`` (both polarizations)."""
    psd = ase_psd(amp, frequency)
    if psd == 0:
        return np.inf
    return 10 * np.log10(signal_power / (n_amplifiers * 2 * psd * reference_bandwidth))

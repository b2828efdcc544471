"""Chromatic-dispersion compensation and genie phase/gain alignment."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import fft as sfft

from ..channel.fiber import FiberParams, apply_dispersion, dispersion_memory
from ..channel.waveform import Waveform


def cd_compensate(wave: Waveform, fiber: FiberParams, total_distance_km: float) -> Waveform:
    """Multiply by ``exp(-j beta2/2 w^2 L)`` on a zero-padded block.

    The padding covers the dispersion memory over the full sampled band, so
    the compensation acts as a linear (not circular) all-pass filter.
    """
    if total_distance_km == 0:
        return wave
    n = len(wave)
    pad = dispersion_memory(fiber.beta2, total_distance_km, wave.sample_rate)
    nfft = sfft.next_fast_len(n + 2 * pad)
    left = (nfft - n) // 2
    s = np.zeros((2, nfft), dtype=complex)
    s[:, left:left + n] = wave.samples
    s = apply_dispersion(s, wave.sample_rate, -fiber.beta2, total_distance_km)
    return wave.with_samples(s[:, left:left + n])


@dataclass
class PhaseCorrection:
    symbols: np.ndarray
    phase: np.ndarray    # per polarization, rad
    flagged: np.ndarray  # zero cross-correlation, left unrotated


def genie_phase_correct(received, transmitted) -> PhaseCorrection:
    """Rotate each polarization by ``arg(sum y conj(x))``, one angle per block."""
    y = np.atleast_2d(np.asarray(received, dtype=complex))
    x = np.atleast_2d(np.asarray(transmitted, dtype=complex))
    if y.shape != x.shape:
        raise ValueError(f"length mismatch: {y.shape} vs {x.shape}")
    corr = np.sum(y * np.conj(x), axis=-1)
    flagged = np.abs(corr) == 0
    phase = np.where(flagged, 0.0, np.angle(corr))
    out = y * np.exp(-1j * phase)[:, None]
    if np.ndim(received) == 1:
        out = out[0]
    return PhaseCorrection(out, phase, flagged)


def least_squares_gain(received, transmitted) -> np.ndarray:
    """Real per-polarization gain ``g`` minimizing ``|y - g x|^2``.

    Dividing ``y`` by this regression gain leaves additive noise untouched
    (``g = 1`` on an AWGN channel), unlike the Wiener-style fit of ``x`` on ``y``.
    """
    y = np.atleast_2d(np.asarray(received, dtype=complex))
    x = np.atleast_2d(np.asarray(transmitted, dtype=complex))
    num = np.real(np.sum(y * np.conj(x), axis=-1))
    den = np.sum(np.abs(x) ** 2, axis=-1)
    ok = (den > 0) & (num != 0)
    return np.where(ok, num / np.where(ok, den, 1), 1.0)


def align(received, transmitted) -> np.ndarray:
    """Genie phase correction followed by division by the least-squares gain."""
    pc = genie_phase_correct(received, transmitted)
    y = np.atleast_2d(pc.symbols)
    g = least_squares_gain(y, transmitted)
    out = y / g[:, None]
    return out[0] if np.ndim(received) == 1 else out

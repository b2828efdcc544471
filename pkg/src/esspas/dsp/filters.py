"""Root-raised-cosine pulse shaping, resampling and matched filtering.

Gain convention: the transmit filter uses ``sqrt(sps) * taps`` and the matched
filter ``taps / sqrt(sps)`` with unit-energy ``taps``. The waveform's mean
power then equals the mean symbol energy and the cascade has unit gain at
the symbol instants, independent of the sample rate in between.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.signal import firwin, kaiserord, oaconvolve, resample_poly, upfirdn

from ..channel.waveform import Waveform


class AlignmentError(ValueError):
    """Recorded group delay does not land on a sample or runs off the block."""


def rrc_taps(roll_off: float, span: int, sps: int) -> np.ndarray:
    """Unit-energy RRC impulse response, ``span * sps + 1`` taps, symmetric.

    When ``span * sps`` is odd the tap count is even and the centre falls
    halfway between two taps.
    """
    if not 0 < roll_off <= 1:
        raise ValueError("roll-off must lie in (0, 1]")
    if span < 1 or sps < 1:
        raise ValueError("span and sps must be positive")
    b = roll_off
    n = span * sps + 1
    t = (np.arange(n) - (n - 1) / 2) / sps
    h = np.empty_like(t)
    at_zero = np.isclose(t, 0)
    at_sing = np.isclose(np.abs(t), 1 / (4 * b))
    reg = ~(at_zero | at_sing)
    tr = t[reg]
    h[reg] = (np.sin(np.pi * tr * (1 - b)) + 4 * b * tr * np.cos(np.pi * tr * (1 + b))) / (
        np.pi * tr * (1 - (4 * b * tr) ** 2)
    )
    h[at_zero] = 1 - b + 4 * b / np.pi
    h[at_sing] = b / np.sqrt(2) * (
        (1 + 2 / np.pi) * np.sin(np.pi / (4 * b)) + (1 - 2 / np.pi) * np.cos(np.pi / (4 * b))
    )
    return h / np.linalg.norm(h)


@dataclass(frozen=True)
class RrcFilter:
    roll_off: float = 0.1
    span: int = 256
    sps: int = 16

    @cached_property
    def taps(self) -> np.ndarray:
        return rrc_taps(self.roll_off, self.span, self.sps)

    @property
    def delay(self) -> float:
        """Group delay in samples; half-integer for even tap counts."""
        return (len(self.taps) - 1) / 2

    def at_sps(self, sps: int) -> "RrcFilter":
        return RrcFilter(self.roll_off, self.span, sps)

    def to_csv(self, path: str) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["index", "time_symbols", "tap"])
            for i, h in enumerate(self.taps):
                w.writerow([i, (i - self.delay) / self.sps, repr(float(h))])


def pulse_shape(symbols, symbol_rate: float, sps: int = 16, rrc: RrcFilter = None,
                **wave_kw) -> Waveform:
    """Zero-insertion upsampling and RRC filtering of ``(2, n)`` symbols.

    The first symbol peaks at sample ``rrc.delay``, recorded in ``delay``.
    """
    rrc = RrcFilter(sps=sps) if rrc is None else rrc.at_sps(sps)
    if sps < max(2, 1 + rrc.roll_off):
        raise ValueError(f"sps={sps} below the Nyquist margin for roll-off {rrc.roll_off}")
    x = np.atleast_2d(np.asarray(symbols, dtype=complex))
    if x.shape[0] != 2:
        raise ValueError("symbols must have shape (2, n)")
    s = upfirdn(rrc.taps * math.sqrt(sps), x, up=sps, axis=-1)
    return Waveform(s, symbol_rate * sps, symbol_rate=symbol_rate, delay=float(rrc.delay), **wave_kw)


def scale_power(wave: Waveform, power_w: float, reference: float = None) -> Waveform:
    """Scale the field so that ``reference`` (default: mean power) maps to ``power_w``."""
    ref = wave.power if reference is None else reference
    return wave.with_samples(wave.samples * math.sqrt(power_w / ref))


def anti_alias_taps(sample_rate: float, target_rate: float, passband: float,
                    attenuation_db: float = 100.0) -> np.ndarray:
    """Kaiser low-pass at the output Nyquist rate.

    The transition band runs from ``passband`` up to ``target_rate - passband``,
    the lowest frequency that can alias back into the passband.
    """
    width = target_rate - 2 * passband
    if width <= 0:
        raise ValueError("target rate too low for the signal bandwidth")
    numtaps, beta = kaiserord(attenuation_db, width / (sample_rate / 2))
    return firwin(numtaps | 1, target_rate / 2, window=("kaiser", beta), fs=sample_rate)


def downsample_to(wave: Waveform, target_sps: int, roll_off: float = 0.1) -> Waveform:
    """Anti-alias filter and decimate by an integer factor.

    The filter keeps the occupied band ``(1 + roll_off) R_s / 2`` with 100 dB
    stop-band attenuation.
    """
    sps = wave.sps
    ratio = sps / target_sps
    if abs(ratio - round(ratio)) > 1e-9 or ratio < 1:
        raise ValueError(f"non-integer resampling ratio {sps}/{target_sps}")
    ratio = int(round(ratio))
    if ratio == 1:
        return wave
    trim = int(math.floor(wave.delay)) % ratio
    aa = anti_alias_taps(wave.sample_rate, wave.sample_rate / ratio, (1 + roll_off) * wave.symbol_rate / 2)
    s = resample_poly(wave.samples[:, trim:], 1, ratio, axis=-1, window=aa)
    return wave.with_samples(s, sample_rate=wave.sample_rate / ratio, delay=(wave.delay - trim) / ratio)


def matched_filter_and_decimate(wave: Waveform, n_symbols: int, rrc: RrcFilter = None) -> np.ndarray:
    """RRC matched filter at the waveform's rate, then one sample per symbol.

    Returns ``(2, n_symbols)``.
    """
    sps = wave.sps
    if abs(sps - round(sps)) > 1e-9:
        raise AlignmentError(f"non-integer samples per symbol {sps}")
    sps = int(round(sps))
    rrc = RrcFilter(sps=sps) if rrc is None else rrc.at_sps(sps)
    start = wave.delay + rrc.delay
    if abs(start - round(start)) > 1e-6:
        raise AlignmentError(f"group delay {wave.delay} is not on the sample grid")
    start = int(round(start))
    if wave.delay < -sps / 2:
        raise AlignmentError(f"group delay {wave.delay} precedes the block by over half a symbol")
    y = oaconvolve(wave.samples, (rrc.taps / math.sqrt(sps))[None, :], mode="full", axes=-1)
    stop = start + (n_symbols - 1) * sps
    if start < 0 or stop >= y.shape[1]:
        raise AlignmentError(f"{n_symbols} symbols at delay {wave.delay} run off a {len(wave)}-sample block")
    return y[:, start:stop + 1:sps]

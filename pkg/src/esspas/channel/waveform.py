"""Dual-polarization sampled waveform and its on-disk dump format."""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

DEFAULT_WAVELENGTH_NM = 1550.0
DEFAULT_CENTER_FREQUENCY = SPEED_OF_LIGHT / (DEFAULT_WAVELENGTH_NM * 1e-9)


@dataclass
class Waveform:
    """Complex baseband field of both polarizations.

    Parameters
    ----------
    samples : ndarray, shape (2, n)
        X and Y polarization, in sqrt(W).
    sample_rate : float
        Hz.
    center_frequency : float
        Optical carrier in Hz.
    symbol_rate : float, optional
        Baud, when the waveform carries a modulated signal.
    delay : float
        Sample index of the first symbol instant (group-delay bookkeeping).
    """

    samples: np.ndarray
    sample_rate: float
    center_frequency: float = DEFAULT_CENTER_FREQUENCY
    symbol_rate: Optional[float] = None
    delay: float = 0.0

    def __post_init__(self):
        s = np.asarray(self.samples)
        if s.ndim == 1:
            raise ValueError("samples must have shape (2, n); got a single polarization")
        if s.ndim != 2 or s.shape[0] != 2:
            raise ValueError(f"samples must have shape (2, n), got {s.shape}")
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")
        if not np.iscomplexobj(s):
            s = s.astype(complex)
        self.samples = s

    def __len__(self):
        return self.samples.shape[1]

    @property
    def sps(self) -> float:
        if self.symbol_rate is None:
            raise ValueError("waveform carries no symbol rate")
        return self.sample_rate / self.symbol_rate

    @property
    def power(self) -> float:
        """Mean total power over both polarizations, W."""
        return float(np.mean(np.sum(np.abs(self.samples) ** 2, axis=0)))

    @property
    def energy(self) -> float:
        return float(np.sum(np.abs(self.samples) ** 2))

    def with_samples(self, samples, **changes) -> "Waveform":
        return replace(self, samples=samples, **changes)


def dump_waveform(wave: Waveform, path: str) -> None:
    """Write interleaved little-endian complex64 ``X0 Y0 X1 Y1 ...`` plus ``path.txt``."""
    inter = np.empty(2 * len(wave), dtype="<c8")
    inter[0::2] = wave.samples[0]
    inter[1::2] = wave.samples[1]
    inter.tofile(path)
    with open(path + ".txt", "w") as fh:
        fh.write(f"sample_rate={wave.sample_rate!r}\n")
        fh.write(f"center_frequency={wave.center_frequency!r}\n")
        fh.write(f"length={len(wave)}\n")
        if wave.symbol_rate is not None:
            fh.write(f"symbol_rate={wave.symbol_rate!r}\n")
        fh.write(f"delay={wave.delay!r}\n")


def load_waveform(path: str) -> Waveform:
    meta = {}
    with open(path + ".txt") as fh:
        for line in fh:
            if "=" in line:
                key, value = line.strip().split("=", 1)
                meta[key] = value
    try:
        n = int(meta["length"])
        fs = float(meta["sample_rate"])
        fc = float(meta["center_frequency"])
    except KeyError as exc:
        raise ValueError(f"sidecar for {path} lacks {exc.args[0]}") from None
    raw = np.fromfile(path, dtype="<c8")
    if raw.size != 2 * n:
        raise ValueError(f"{path}: expected {2 * n} complex64 values, found {raw.size}")
    samples = np.stack([raw[0::2], raw[1::2]]).astype(complex)
    sr = meta.get("symbol_rate")
    return Waveform(samples, fs, fc, float(sr) if sr else None, float(meta.get("delay", 0.0)))

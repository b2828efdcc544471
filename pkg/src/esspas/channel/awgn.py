"""Additive white Gaussian noise on complex symbols."""
from __future__ import annotations

from typing import Optional

import numpy as np


def awgn(symbols, snr_db: float, rng_seed=None, signal_power: Optional[float] = None) -> np.ndarray:
    """Add circularly-symmetric complex Gaussian noise.

    SNR is ``E[|X|^2] / sigma^2`` per complex symbol. ``E[|X|^2]`` is the
    empirical mean power unless ``signal_power`` is given. ``snr_db = inf``
    returns an unmodified copy.
    """
    x = np.asarray(symbols)
    if np.isposinf(snr_db):
        return x.astype(complex)
    if signal_power is None:
        signal_power = float(np.mean(np.abs(x) ** 2))
    sigma2 = signal_power / 10 ** (snr_db / 10)
    rng = np.random.default_rng(rng_seed)
    noise = rng.standard_normal((2,) + x.shape)
    return x + np.sqrt(sigma2 / 2) * (noise[0] + 1j * noise[1])

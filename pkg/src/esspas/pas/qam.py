"""Square QAM as the Cartesian product of two PAM streams."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class QamBlock:
    """Complex symbols on the integer PAM grid plus their RMS normalisation.

    ``symbols`` are never rescaled in place; ``normalized`` divides by
    ``scale`` on demand.
    """

    symbols: np.ndarray
    scale: float

    @property
    def normalized(self) -> np.ndarray:
        return self.symbols / self.scale


def qam_assemble(pam_i, pam_q, scale=None) -> QamBlock:
    """Combine in-phase and quadrature PAM streams into ``I + jQ``.

    ``scale`` defaults to the empirical RMS of the result; pass the design
    value (e.g. from the shaper distribution) to keep it data independent.
    """
    pam_i = np.asarray(pam_i, dtype=float)
    pam_q = np.asarray(pam_q, dtype=float)
    if pam_i.shape != pam_q.shape:
        raise ValueError(f"I/Q length mismatch: {pam_i.shape} vs {pam_q.shape}")
    symbols = pam_i + 1j * pam_q
    if scale is None:
        scale = float(np.sqrt(np.mean(np.abs(symbols) ** 2))) if symbols.size else 1.0
    return QamBlock(symbols=symbols, scale=float(scale))


def design_energy(amplitudes, distribution) -> float:
    """E[|X|^2] of a QAM symbol whose two PAM components follow ``distribution``."""
    a = np.asarray(amplitudes, dtype=float)
    return float(2 * np.sum(np.asarray(distribution) * a * a))

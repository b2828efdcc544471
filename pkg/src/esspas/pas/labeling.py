"""Binary reflected Gray labelling of 2^m-PAM with the sign on the first bit."""
from __future__ import annotations

import numpy as np


class LabelingMap:
    """BRGC labels for the 2^m-PAM points ``-(2^m - 1), ..., -1, 1, ..., 2^m - 1``.

    Column 0 of every label is the sign bit (0 = negative, 1 = positive);
    columns ``1..m-1`` are the amplitude bits, which by the reflection
    property are identical for ``x`` and ``-x``.
    """

    sign_bit = 0

    def __init__(self, m: int):
        if m < 1:
            raise ValueError(f"m must be >= 1, got {m}")
        self.m = m
        size = 2**m
        idx = np.arange(size)
        gray = idx ^ (idx >> 1)
        self.points = (2 * idx - (size - 1)).astype(np.int64)
        shifts = np.arange(m - 1, -1, -1)
        self.labels = ((gray[:, None] >> shifts) & 1).astype(np.uint8)
        self.amplitudes = self.points[size // 2:]
        self.amplitude_labels = self.labels[size // 2:, 1:]
        # label integer (MSB first) -> point index
        self._label_to_index = np.empty(size, dtype=np.int64)
        self._label_to_index[gray] = idx
        amp_codes = self.amplitude_labels @ (1 << np.arange(m - 2, -1, -1)) if m > 1 else np.zeros(1, int)
        self._amp_code_to_amp = np.empty(max(size // 2, 1), dtype=np.int64)
        self._amp_code_to_amp[amp_codes] = self.amplitudes

    def __repr__(self):
        return f"LabelingMap(m={self.m})"

    def point_index(self, x) -> np.ndarray:
        return ((np.asarray(x) + (2**self.m - 1)) // 2).astype(np.int64)

    def label_of(self, x) -> np.ndarray:
        """``(..., m)`` label bits of PAM points ``x``."""
        return self.labels[self.point_index(x)]

    def map_bits(self, bits) -> np.ndarray:
        """``(..., m)`` label bits to PAM points."""
        bits = np.asarray(bits, dtype=np.int64)
        code = bits @ (1 << np.arange(self.m - 1, -1, -1))
        return self.points[self._label_to_index[code]]

    def amplitude_bits(self, amplitudes) -> np.ndarray:
        """``(..., m-1)`` amplitude bits for one-sided amplitudes."""
        amplitudes = np.asarray(amplitudes)
        return self.amplitude_labels[(amplitudes - 1) // 2]

    def amplitudes_from_bits(self, bits) -> np.ndarray:
        bits = np.asarray(bits, dtype=np.int64)
        code = bits @ (1 << np.arange(self.m - 2, -1, -1))
        return self._amp_code_to_amp[code]

    def hard_decision(self, y) -> np.ndarray:
        """Nearest PAM point (points are spaced by 2)."""
        top = 2**self.m - 1
        x = 2 * np.floor(np.asarray(y, dtype=float) / 2) + 1
        return np.clip(x, -top, top).astype(np.int64)

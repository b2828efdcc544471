"""Block-level front end that hides whether ESS or CCDM does the matching."""
from __future__ import annotations

from typing import Optional

import numpy as np

from . import ccdm, ess
from .rates import AmplitudeAlphabet, ShapingConfig, ShapingError, bits_to_int, int_to_bits


class Shaper:
    """Fixed-length distribution matcher: ``k`` bits <-> ``N`` amplitudes.

    ``design_distribution`` is the amplitude marginal used for priors and
    H(A): the trellis marginal for ESS, ``composition / N`` for CCDM.
    """

    def __init__(self, kind: str, N: int, k: int, amplitudes, trellis=None, composition=None):
        self.kind = kind
        self.N = N
        self.k = k
        self.amplitudes = tuple(amplitudes)
        self.trellis: Optional[ess.EnergyTrellis] = trellis
        self.composition: Optional[ccdm.Composition] = composition
        capacity = trellis.total if trellis is not None else ccdm.ccdm_count(composition)
        if capacity < 1 << k:
            raise ShapingError(f"{kind} set of {capacity} sequences cannot index {k} bits")
        self._dist = None

    def __repr__(self):
        return f"Shaper({self.kind}, N={self.N}, k={self.k})"

    @property
    def rate(self) -> float:
        return self.k / self.N

    def design_distribution(self, exact: bool = False):
        if self._dist is None:
            if self.trellis is not None:
                self._dist = ess.ess_amplitude_distribution(self.trellis, exact=True)
            else:
                from fractions import Fraction

                self._dist = [Fraction(c, self.N) for c in self.composition.counts]
        if exact:
            return list(self._dist)
        return np.array([float(p) for p in self._dist])

    def used_distribution(self) -> np.ndarray:
        """Exact marginal of the 2^k sequences the encoder actually emits."""
        if self.trellis is not None:
            return ess.ess_amplitude_distribution(self.trellis, used_only=True, k=self.k)
        return self.design_distribution()

    def encode_index(self, index: int) -> np.ndarray:
        if index >> self.k:
            raise ShapingError(f"index {index} needs more than {self.k} bits")
        if self.trellis is not None:
            return ess.ess_encode_index(self.trellis, index)
        return ccdm.ccdm_encode_index(self.composition, index)

    def decode_index(self, amplitudes) -> int:
        if self.trellis is not None:
            index = ess.ess_decode_index(self.trellis, amplitudes)
        else:
            index = ccdm.ccdm_decode_index(self.composition, amplitudes)
        if index >> self.k:
            raise ShapingError(f"sequence rank {index} >= 2^{self.k}: not in the used subset")
        return index

    def encode(self, bits) -> np.ndarray:
        if len(bits) != self.k:
            raise ShapingError(f"shaper input must be {self.k} bits, got {len(bits)}")
        return self.encode_index(bits_to_int(bits))

    def decode(self, amplitudes) -> np.ndarray:
        return int_to_bits(self.decode_index(amplitudes), self.k)

    def encode_blocks(self, bits) -> np.ndarray:
        """``(blocks, k)`` bits -> ``(blocks, N)`` amplitudes."""
        bits = np.asarray(bits, dtype=np.uint8).reshape(-1, self.k)
        out = np.empty((len(bits), self.N), dtype=np.int64)
        for b, row in enumerate(bits):
            out[b] = self.encode(row)
        return out

    def decode_blocks(self, amplitudes, strict: bool = True):
        """``(blocks, N)`` amplitudes -> ``(blocks, k)`` bits.

        With ``strict`` the first failing block raises, naming its index;
        otherwise failing blocks are zero-filled and returned as a list of
        ``(block, message)`` pairs alongside the bits.
        """
        amplitudes = np.asarray(amplitudes).reshape(-1, self.N)
        out = np.zeros((len(amplitudes), self.k), dtype=np.uint8)
        errors = []
        for b, row in enumerate(amplitudes):
            try:
                out[b] = self.decode(row)
            except ShapingError as exc:
                if strict:
                    raise ShapingError(f"block {b}: {exc}") from exc
                errors.append((b, str(exc)))
        if strict:
            return out
        return out, errors


def make_shaper(config: ShapingConfig) -> Shaper:
    """Build the matcher described by a bound :class:`ShapingConfig`."""
    alphabet = AmplitudeAlphabet(config.m)
    if config.e_max is not None:
        trellis = ess.build_trellis(alphabet, config.N, config.e_max)
        return Shaper("ess", config.N, config.k, alphabet.amplitudes, trellis=trellis)
    if config.composition is not None:
        comp = ccdm.Composition(config.composition, alphabet.amplitudes)
        return Shaper("ccdm", config.N, config.k, alphabet.amplitudes, composition=comp)
    raise ShapingError("config is not bound to a shaper (no e_max or composition)")

"""PAS and uniform BICM transmit/receive chains on 1D PAM streams.

Frame layout (PAS, per FEC frame of ``F`` symbols):

* systematic encoder input = amplitude bit-planes, level by level
  (``(m-1) F`` bits), followed by the ``gamma F`` extra information bits;
* sign bits of the ``F`` symbols = the ``(1-R_c) m F`` parity bits followed
  by the extra bits.

A *superframe* of ``lcm(N, F)`` symbols holds a whole number of shaper
blocks and of FEC frames; streams are processed superframe by superframe.
Without a code ("genie" mode) the parity bits are replaced by seeded
pseudo-random bits and the receiver works from hard decisions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from ..shaping.rates import as_fraction, gamma
from ..shaping.shaper import Shaper
from .labeling import LabelingMap
from .ldpc import LdpcCode, MAX_ITERATIONS


class FrameError(ValueError):
    """Stream length or code geometry does not fit the frame layout."""


@dataclass
class PasFrame:
    """Everything the transmitter produced for a stream of ``S`` 1D symbols."""

    amplitudes: np.ndarray       # (S,)
    extra_bits: np.ndarray       # (gamma S,)
    amplitude_bits: np.ndarray   # (S, m-1)
    parity_bits: np.ndarray      # ((1-R_c) m S,)
    sign_bits: np.ndarray        # (S,)
    symbols: np.ndarray          # (S,) signed PAM values
    labels: np.ndarray           # (S, m) full labels, column 0 = sign


@dataclass
class ReceiveResult:
    info: np.ndarray
    frames_converged: Optional[np.ndarray] = None
    block_errors: List[Tuple[int, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        fec_ok = self.frames_converged is None or bool(self.frames_converged.all())
        return fec_ok and not self.block_errors


def _check_code(code: LdpcCode, m: int, fec_rate: Fraction):
    if code.rate != fec_rate:
        raise FrameError(f"code rate {code.rate} differs from FEC rate {fec_rate}")
    if code.n % m:
        raise FrameError(f"code length {code.n} is not a multiple of m={m}")
    return code.n // m


class PasChain:
    """Shaper + systematic FEC + BRGC mapping for one real dimension."""

    def __init__(self, shaper: Shaper, fec_rate, code: Optional[LdpcCode] = None,
                 labeling: Optional[LabelingMap] = None, genie_seed: int = 0):
        self.shaper = shaper
        self.m = int(math.log2(len(shaper.amplitudes))) + 1
        if 2 ** (self.m - 1) != len(shaper.amplitudes):
            raise FrameError("shaper alphabet size is not a power of two")
        self.fec_rate = as_fraction(fec_rate)
        self.gamma = gamma(self.m, self.fec_rate)
        self.labeling = labeling or LabelingMap(self.m)
        self.code = code
        if code is not None:
            F = _check_code(code, self.m, self.fec_rate)
            if (self.gamma * F).denominator != 1:
                raise FrameError(f"gamma*F = {self.gamma * F} is not an integer")
        else:
            F = shaper.N
            while (self.gamma * F).denominator != 1 or ((1 - self.fec_rate) * self.m * F).denominator != 1:
                F += shaper.N
        self.frame_symbols = F
        self.extra_per_frame = int(self.gamma * F)
        self.parity_per_frame = F - self.extra_per_frame
        self.superframe = math.lcm(shaper.N, F)
        self.blocks_per_super = self.superframe // shaper.N
        self.frames_per_super = self.superframe // F
        self.shaped_bits_per_super = self.blocks_per_super * shaper.k
        self.info_per_super = self.shaped_bits_per_super + self.frames_per_super * self.extra_per_frame
        self.genie_seed = genie_seed

    def __repr__(self):
        mode = self.code.name if self.code is not None else "genie"
        return f"PasChain({self.shaper!r}, R_c={self.fec_rate}, fec={mode}, F={self.frame_symbols})"

    @property
    def info_rate(self) -> Fraction:
        return Fraction(self.info_per_super, self.superframe)

    def info_bits_for(self, n_symbols: int) -> int:
        if n_symbols % self.superframe:
            raise FrameError(f"{n_symbols} symbols is not a multiple of the superframe {self.superframe}")
        return n_symbols // self.superframe * self.info_per_super

    def symbols_for(self, min_symbols: int) -> int:
        """Smallest whole number of superframes covering ``min_symbols``."""
        return -(-min_symbols // self.superframe) * self.superframe

    def transmit(self, info) -> PasFrame:
        info = np.asarray(info, dtype=np.uint8).ravel()
        if info.size % self.info_per_super:
            raise FrameError(
                f"{info.size} info bits is not a multiple of {self.info_per_super} per superframe"
            )
        nsup = info.size // self.info_per_super
        info = info.reshape(nsup, self.info_per_super)
        F, m = self.frame_symbols, self.m
        frames = nsup * self.frames_per_super

        amps = self.shaper.encode_blocks(info[:, :self.shaped_bits_per_super])
        amps = amps.reshape(frames, F)
        extra = info[:, self.shaped_bits_per_super:].reshape(frames, self.extra_per_frame)
        amp_bits = self.labeling.amplitude_bits(amps)  # (frames, F, m-1)
        planes = amp_bits.transpose(0, 2, 1).reshape(frames, (m - 1) * F)

        if self.code is not None:
            cw = self.code.encode(np.concatenate([planes, extra], axis=1))
            parity = cw[:, self.code.parity_positions]
        else:
            rng = np.random.default_rng(self.genie_seed)
            parity = rng.integers(0, 2, (frames, self.parity_per_frame), dtype=np.uint8)
        signs = np.concatenate([parity, extra], axis=1)
        symbols = np.where(signs == 1, amps, -amps)
        labels = np.concatenate([signs[..., None], amp_bits], axis=2)
        return PasFrame(
            amplitudes=amps.ravel(),
            extra_bits=extra.ravel(),
            amplitude_bits=amp_bits.reshape(-1, m - 1),
            parity_bits=parity.ravel(),
            sign_bits=signs.ravel(),
            symbols=symbols.ravel(),
            labels=labels.reshape(-1, m),
        )

    def _finish(self, amp_bits, extra, converged=None) -> ReceiveResult:
        """amp_bits (frames, F, m-1), extra (frames, gamma F) -> info stream."""
        frames = amp_bits.shape[0]
        nsup = frames // self.frames_per_super
        amps = self.labeling.amplitudes_from_bits(amp_bits).reshape(-1, self.shaper.N)
        shaped, errors = self.shaper.decode_blocks(amps, strict=False)
        info = np.concatenate(
            [shaped.reshape(nsup, -1), extra.reshape(nsup, -1)], axis=1
        ).ravel()
        return ReceiveResult(info=info, frames_converged=converged, block_errors=errors)

    def receive_llrs(self, llrs, decode: bool = True,
                     max_iterations: int = MAX_ITERATIONS) -> ReceiveResult:
        """Invert :meth:`transmit` from ``(S, m)`` LLRs (column 0 = sign)."""
        F, m = self.frame_symbols, self.m
        llrs = np.asarray(llrs, dtype=float).reshape(-1, F, m)
        frames = llrs.shape[0]
        if frames % self.frames_per_super:
            raise FrameError("LLR stream does not cover whole superframes")
        if self.code is None or not decode:
            hard = (llrs < 0).astype(np.uint8)
            return self._finish(hard[:, :, 1:], hard[:, self.parity_per_frame:, 0])
        planes = llrs[:, :, 1:].transpose(0, 2, 1).reshape(frames, (m - 1) * F)
        sign = llrs[:, :, 0]
        cw_llr = np.empty((frames, self.code.n))
        cw_llr[:, self.code.info_positions] = np.concatenate(
            [planes, sign[:, self.parity_per_frame:]], axis=1
        )
        cw_llr[:, self.code.parity_positions] = sign[:, :self.parity_per_frame]
        result = self.code.decode(cw_llr, max_iterations=max_iterations)
        sys_bits = self.code.extract_info(result.bits)
        amp_bits = sys_bits[:, :(m - 1) * F].reshape(frames, m - 1, F).transpose(0, 2, 1)
        extra = sys_bits[:, (m - 1) * F:]
        return self._finish(amp_bits, extra, converged=result.converged)

    def receive_symbols(self, symbols) -> ReceiveResult:
        """Genie path: hard-decide PAM symbols and deshape without FEC decoding."""
        x = self.labeling.hard_decision(np.asarray(symbols, dtype=float))
        labels = self.labeling.label_of(x).reshape(-1, self.frame_symbols, self.m)
        return self._finish(labels[:, :, 1:], labels[:, self.parity_per_frame:, 0])


class UniformChain:
    """Uniform BICM reference: FEC codeword bits Gray-mapped to 2^m-PAM."""

    def __init__(self, m: int, fec_rate, code: Optional[LdpcCode] = None,
                 labeling: Optional[LabelingMap] = None):
        self.m = m
        self.fec_rate = as_fraction(fec_rate)
        self.labeling = labeling or LabelingMap(m)
        self.code = code
        if code is not None:
            self.frame_symbols = _check_code(code, m, self.fec_rate)
            self.info_per_frame = code.k
        else:
            self.frame_symbols = 1
            self.info_per_frame = m
        self.superframe = self.frame_symbols

    def __repr__(self):
        mode = self.code.name if self.code is not None else "uncoded"
        return f"UniformChain(m={self.m}, R_c={self.fec_rate}, fec={mode})"

    @property
    def info_rate(self) -> Fraction:
        return self.m * self.fec_rate

    def info_bits_for(self, n_symbols: int) -> int:
        if n_symbols % self.frame_symbols:
            raise FrameError(f"{n_symbols} symbols is not a multiple of the frame {self.frame_symbols}")
        return n_symbols // self.frame_symbols * self.info_per_frame

    def symbols_for(self, min_symbols: int) -> int:
        return -(-min_symbols // self.frame_symbols) * self.frame_symbols

    def transmit(self, info) -> Tuple[np.ndarray, np.ndarray]:
        """Return ``(labels (S, m), symbols (S,))``."""
        info = np.asarray(info, dtype=np.uint8).ravel()
        if info.size % self.info_per_frame:
            raise FrameError(f"{info.size} info bits is not a multiple of {self.info_per_frame}")
        frames = info.size // self.info_per_frame
        F = self.frame_symbols
        if self.code is not None:
            cw = self.code.encode(info.reshape(frames, -1))
        else:
            cw = info.reshape(frames, -1)
        labels = cw.reshape(frames, self.m, F).transpose(0, 2, 1).reshape(-1, self.m)
        return labels, self.labeling.map_bits(labels)

    def receive_llrs(self, llrs, decode: bool = True,
                     max_iterations: int = MAX_ITERATIONS) -> ReceiveResult:
        F = self.frame_symbols
        llrs = np.asarray(llrs, dtype=float).reshape(-1, F, self.m)
        cw_llr = llrs.transpose(0, 2, 1).reshape(llrs.shape[0], -1)
        if self.code is None or not decode:
            bits = (cw_llr < 0).astype(np.uint8)
            if self.code is not None:
                bits = self.code.extract_info(bits)
            return ReceiveResult(info=bits.ravel())
        result = self.code.decode(cw_llr, max_iterations=max_iterations)
        return ReceiveResult(info=self.code.extract_info(result.bits).ravel(),
                             frames_converged=result.converged)

    def receive_symbols(self, symbols) -> ReceiveResult:
        x = self.labeling.hard_decision(np.asarray(symbols, dtype=float))
        labels = self.labeling.label_of(x)
        F = self.frame_symbols
        cw = labels.reshape(-1, F, self.m).transpose(0, 2, 1).reshape(-1, F * self.m)
        if self.code is not None:
            cw = self.code.extract_info(cw)
        return ReceiveResult(info=cw.ravel())


def pas_transmit(info, shaper: Shaper, fec_rate, code=None, labeling=None):
    """Functional form: ``(PasFrame, symbols)``."""
    frame = PasChain(shaper, fec_rate, code, labeling).transmit(info)
    return frame, frame.symbols


def uniform_transmit(info, fec_rate, code=None, m: int = 3, labeling=None):
    return UniformChain(m, fec_rate, code, labeling).transmit(info)[1]


def pas_receive(llrs, shaper: Shaper, fec_rate, code=None, labeling=None, decode=True) -> ReceiveResult:
    return PasChain(shaper, fec_rate, code, labeling).receive_llrs(llrs, decode=decode)

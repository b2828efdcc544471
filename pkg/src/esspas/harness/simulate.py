"""One grid point end to end: shape, PAS, modulate, propagate, DSP, metrics.

The four real PAM streams of a block (XI, XQ, YI, YQ) are consecutive
segments of one chain output, so every real dimension carries whole shaper
blocks and FEC frames of its own.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from ..channel import (
    AmplifierParams,
    FiberParams,
    WdmConfig,
    awgn,
    propagate_link,
    wdm_mux,
)
from ..dsp import RrcFilter, align, receive_symbols, transmit_waveform
from ..metrics import MetricsReport, evaluate
from ..pas import LabelingMap, LdpcCode, PasChain, UniformChain, compute_llrs, pam_priors
from ..shaping import make_shaper, plan_rate, rate_loss
from .config import ExperimentConfig


@dataclass
class SchemeRuntime:
    """Chain plus the distribution and rate loss the metrics need."""

    chain: object
    m: int
    distribution: Optional[np.ndarray]
    rate_loss: float

    @property
    def unit(self) -> int:
        """Smallest QAM block length: four real streams of whole superframes."""
        return self.chain.superframe

    def qam_symbols_for(self, n_min: int) -> int:
        return -(-n_min // self.unit) * self.unit


@lru_cache(maxsize=None)
def _runtime(scheme: str, N: int, m: int, target, fec_rate, fec: str, uniform_m: int) -> SchemeRuntime:
    code = None if fec in ("none", "genie") else LdpcCode.builtin(fec)
    if scheme == "uniform":
        return SchemeRuntime(UniformChain(uniform_m, fec_rate, code), uniform_m, None, 0.0)
    shaper = make_shaper(plan_rate(target, m, fec_rate, N, shaper=scheme))
    dist = shaper.design_distribution()
    return SchemeRuntime(PasChain(shaper, fec_rate, code), m, dist, rate_loss(dist, shaper.k, shaper.N))


def runtime_for(cfg: ExperimentConfig) -> SchemeRuntime:
    um = cfg.uniform_m if cfg.scheme == "uniform" else 0
    return _runtime(cfg.scheme, cfg.N, cfg.m, cfg.target_rate, cfg.fec_rate, cfg.fec, um)


def _to_qam(stream: np.ndarray) -> np.ndarray:
    s = stream.reshape(4, -1)
    return np.stack([s[0] + 1j * s[1], s[2] + 1j * s[3]])


def _from_qam(x: np.ndarray) -> np.ndarray:
    return np.concatenate([x[0].real, x[0].imag, x[1].real, x[1].imag])


@dataclass
class TxBlock:
    info: np.ndarray
    x: np.ndarray  # (2, n) complex PAM symbols
    labels: Optional[np.ndarray] = None


def generate(rt: SchemeRuntime, n_qam: int, rng) -> TxBlock:
    """Random info bits through the chain; ``n_qam`` is rounded up to whole superframes."""
    n = rt.qam_symbols_for(n_qam)
    S = 4 * n
    info = rng.integers(0, 2, rt.chain.info_bits_for(S), dtype=np.uint8)
    if isinstance(rt.chain, UniformChain):
        labels, stream = rt.chain.transmit(info)
    else:
        frame = rt.chain.transmit(info)
        labels, stream = frame.labels, frame.symbols
    return TxBlock(info=info, x=_to_qam(stream.astype(float)), labels=labels)


def fiber_params(cfg: ExperimentConfig) -> FiberParams:
    return FiberParams(alpha=cfg.alpha, D=cfg.D, gamma_nl=cfg.gamma_nl,
                       span_length=cfg.span_length, wavelength=cfg.wavelength)


def amplifier_params(cfg: ExperimentConfig, fiber: FiberParams) -> AmplifierParams:
    gain = fiber.span_loss_db if cfg.gain_db is None else cfg.gain_db
    return AmplifierParams(gain=gain, noise_figure=cfg.noise_figure, noise=cfg.ase)


def dbm_to_w(p_dbm: float) -> float:
    return 1e-3 * 10 ** (p_dbm / 10)


def run_awgn_point(cfg: ExperimentConfig, snr_db: float, seed: int) -> MetricsReport:
    rt = runtime_for(cfg)
    ss = np.random.SeedSequence(seed)
    data_seed, noise_seed = ss.spawn(2)
    tx = generate(rt, cfg.symbols, np.random.default_rng(data_seed))
    y = awgn(tx.x, snr_db, np.random.default_rng(noise_seed))
    y = align(y, tx.x)
    return evaluate(tx.x, y, rt.m, rt.distribution, rt.rate_loss)


def propagate_channels(cfg: ExperimentConfig, power_dbm: float, n_spans: int, seed: int):
    """Transmit ``cfg.channels`` independent channels; returns ``(tx of centre, rx symbols)``."""
    rt = runtime_for(cfg)
    fiber = fiber_params(cfg)
    distance = n_spans * fiber.span_length
    rrc = RrcFilter(cfg.roll_off, cfg.rrc_span, cfg.sps)
    seeds = np.random.SeedSequence(seed).spawn(cfg.channels + 1)
    power = dbm_to_w(power_dbm)
    wdm = WdmConfig(cfg.channels, cfg.spacing, cfg.symbol_rate, cfg.roll_off) if cfg.channels > 1 else None
    centre = cfg.channels // 2
    waves, blocks = [], []
    for ch in range(cfg.channels):
        tx = generate(rt, cfg.symbols, np.random.default_rng(seeds[ch]))
        blocks.append(tx)
        waves.append(transmit_waveform(tx.x, cfg.symbol_rate, cfg.sps, rrc, power, fiber, distance))
    wave = wdm_mux(waves, wdm) if wdm is not None else waves[0]
    if n_spans:
        wave = propagate_link(
            wave, fiber, n_spans, amplifier_params(cfg, fiber), seeds[-1], cfg.step_km,
            cfg.nl_phase_max, power_w=power * cfg.channels,
            dtype=np.complex64 if cfg.precision == "complex64" else np.complex128,
        )
    tx = blocks[centre]
    y = receive_symbols(wave, tx.x.shape[1], fiber, distance, cfg.rx_sps, rrc, wdm, centre)
    return tx, y


def run_fiber_point(cfg: ExperimentConfig, power_dbm: float, n_spans: int, seed: int) -> MetricsReport:
    rt = runtime_for(cfg)
    tx, y = propagate_channels(cfg, power_dbm, n_spans, seed)
    y = align(y, tx.x)
    return evaluate(tx.x, y, rt.m, rt.distribution, rt.rate_loss)


@dataclass
class LoopbackResult:
    info: np.ndarray
    decoded: np.ndarray
    converged: bool
    block_errors: list

    @property
    def ok(self) -> bool:
        return self.converged and not self.block_errors and np.array_equal(self.info, self.decoded)


def loopback(cfg: ExperimentConfig, min_info_bits: int = 10_000, seed: int = 0) -> LoopbackResult:
    """Noiseless chain through RRC, 0 km and the receiver DSP, LLRs and FEC/genie.

    Uses enough QAM symbols to carry at least ``min_info_bits``.
    """
    rt = runtime_for(cfg)
    per_block = rt.chain.info_bits_for(4 * rt.unit)
    n_qam = math.ceil(min_info_bits / per_block) * rt.unit
    tx = generate(rt, n_qam, np.random.default_rng(seed))
    rrc = RrcFilter(cfg.roll_off, cfg.rrc_span, cfg.sps)
    wave = transmit_waveform(tx.x, cfg.symbol_rate, cfg.sps, rrc, power_w=dbm_to_w(0.0))
    y = align(receive_symbols(wave, tx.x.shape[1], rx_sps=cfg.rx_sps, rrc=rrc), tx.x)
    stream = _from_qam(y)
    lab = LabelingMap(rt.m)
    var = max(float(np.mean(np.abs(y - tx.x) ** 2)), 1e-6)
    priors = pam_priors(lab, rt.distribution)
    llrs = compute_llrs(stream, var, lab, priors)
    res = rt.chain.receive_llrs(llrs)
    return LoopbackResult(
        info=tx.info, decoded=res.info,
        converged=res.frames_converged is None or bool(np.all(res.frames_converged)),
        block_errors=list(res.block_errors),
    )

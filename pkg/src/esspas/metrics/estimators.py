"""Finite-blocklength BMD rate, effective SNR and their entropy estimators.

Per-1D quantities are in bits per real dimension; ``*_4d`` values are four
times that (two quadratures by two polarizations).
"""
from __future__ import annotations

import math
from typing import Sequence, Tuple

import numpy as np
from scipy import stats

from ..shaping.entropy import entropy_bits

DIMS_4D = 4


def effective_snr(x, y) -> float:
    """``10 log10(E|X|^2 / E|Y - X|^2)`` over the block; ``inf`` when Y == X.

    ``y`` must already be phase- and gain-aligned to ``x``. Averaging over the
    transmitted block weights each constellation point by how often it was
    sent, so shaped and uniform formats are compared on equal terms.
    """
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    err = float(np.mean(np.abs(y - x) ** 2))
    if err == 0:
        return math.inf
    return 10 * math.log10(float(np.mean(np.abs(x) ** 2)) / err)


def bit_entropy_terms(llrs, bits) -> np.ndarray:
    """Per-sample ``log2(1 + exp(-(1 - 2c) lambda))``, same shape as ``llrs``."""
    llrs = np.asarray(llrs, dtype=float)
    bits = np.asarray(bits).astype(np.int8)
    if llrs.shape != bits.shape:
        raise ValueError(f"LLR/bit shape mismatch: {llrs.shape} vs {bits.shape}")
    if not np.isfinite(llrs).all():
        raise ValueError("LLRs contain NaN or Inf")
    return np.logaddexp(0.0, -(1 - 2 * bits) * llrs) / math.log(2)


def conditional_entropy_bmd(llrs, bits) -> np.ndarray:
    """Monte Carlo ``H(C_i | Y)`` for each bit level (column), bits.

    Under mismatched LLRs this upper-bounds the true conditional entropy.
    """
    terms = bit_entropy_terms(llrs, bits)
    return terms.reshape(-1, terms.shape[-1]).mean(axis=0)


def coded_bit_entropy(amplitude_distribution=None, m: int = None) -> float:
    """``H(C) = H(A) + 1`` per real dimension; ``m`` bits when no distribution is given."""
    if amplitude_distribution is None:
        if m is None:
            raise ValueError("uniform mode needs m")
        return float(m)
    return entropy_bits(amplitude_distribution) + 1.0


def air_n(h_c: float, h_ci_list: Sequence[float], rate_loss_per_amp: float) -> float:
    """``4 [(H(C) - sum H(C_i|Y)) - (H(A) - k/N)]`` in bits/4D-symbol."""
    return DIMS_4D * (h_c - float(np.sum(h_ci_list)) - rate_loss_per_amp)


def bmd_rate(h_c: float, h_ci_list: Sequence[float]) -> float:
    return DIMS_4D * (h_c - float(np.sum(h_ci_list)))


def batch_means(values, n_batches: int = 20, confidence: float = 0.95) -> Tuple[float, float]:
    """Mean and CI half-width from ``n_batches`` contiguous batch means."""
    v = np.asarray(values, dtype=float).ravel()
    if v.size < 2 * n_batches:
        n_batches = max(2, v.size // 2)
    usable = v.size - v.size % n_batches
    means = v[:usable].reshape(n_batches, -1).mean(axis=1)
    half = stats.t.ppf(0.5 + confidence / 2, n_batches - 1) * means.std(ddof=1) / math.sqrt(n_batches)
    return float(v.mean()), float(half)


def snr_batch_ci(x, y, n_batches: int = 20, confidence: float = 0.95) -> float:
    """CI half-width of :func:`effective_snr` in dB from per-batch estimates."""
    x = np.asarray(x).ravel()
    y = np.asarray(y).ravel()
    if x.size < 2 * n_batches:
        n_batches = max(2, x.size // 2)
    if x.size < 4:
        return math.nan
    usable = x.size - x.size % n_batches
    xb = x[:usable].reshape(n_batches, -1)
    yb = y[:usable].reshape(n_batches, -1)
    per = 10 * np.log10(np.mean(np.abs(xb) ** 2, 1) / np.mean(np.abs(yb - xb) ** 2, 1))
    return float(stats.t.ppf(0.5 + confidence / 2, n_batches - 1) * per.std(ddof=1) / math.sqrt(n_batches))


def reach_at_air(sweep: Sequence[Tuple[float, float]], target_air: float) -> float:
    """Distance where AIR_N falls through ``target_air``, by linear interpolation.

    ``sweep`` is ``(distance_km, air_n)`` pairs; AIR_N must decrease with
    distance around the crossing.
    """
    pts = sorted((float(d), float(a)) for d, a in sweep)
    if not pts:
        raise ValueError("empty sweep")
    d = np.array([p[0] for p in pts])
    a = np.array([p[1] for p in pts])
    if not (a.min() <= target_air <= a.max()):
        raise ValueError(f"target {target_air} outside swept AIR range [{a.min()}, {a.max()}]")
    for i in range(len(d)):
        if a[i] == target_air and (i + 1 == len(d) or a[i + 1] < target_air):
            return float(d[i])
    for i in range(len(d) - 1):
        if a[i] >= target_air > a[i + 1]:
            return float(d[i] + (a[i] - target_air) / (a[i] - a[i + 1]) * (d[i + 1] - d[i]))
    raise ValueError("AIR does not cross the target while decreasing in distance")

"""Bit-wise LLRs for PAM with non-uniform priors."""
from __future__ import annotations

import numpy as np
from scipy.special import logsumexp

from .labeling import LabelingMap
from .ldpc import LLR_CLIP

_CHUNK = 1 << 16


def pam_priors(labeling: LabelingMap, amplitude_distribution=None) -> np.ndarray:
    """Per-point prior over the 2^m-PAM points.

    Shaped: ``P(x) = P_A(|x|) / 2`` (uniform independent sign). ``None``
    gives uniform priors.
    """
    size = len(labeling.points)
    if amplitude_distribution is None:
        return np.full(size, 1.0 / size)
    pa = np.asarray(amplitude_distribution, dtype=float)
    if len(pa) != size // 2:
        raise ValueError(f"need {size // 2} amplitude probabilities, got {len(pa)}")
    if abs(pa.sum() - 1) > 1e-9:
        raise ValueError("amplitude distribution does not sum to 1")
    return np.concatenate([pa[::-1], pa]) / 2


def compute_llrs(y, noise_variance: float, labeling: LabelingMap, priors=None,
                 clip: float = LLR_CLIP) -> np.ndarray:
    """LLRs ``(n, m)`` for real received samples ``y`` in PAM units.

    ``noise_variance`` is the per-complex-dimension variance, so each real
    dimension sees half of it. Column 0 is the sign bit. Positive means bit
    0 is more likely.
    """
    if noise_variance <= 0:
        raise ValueError("noise variance must be positive")
    y = np.asarray(y, dtype=float).ravel()
    if priors is None:
        priors = pam_priors(labeling)
    with np.errstate(divide="ignore"):
        log_prior = np.log(np.asarray(priors, dtype=float))
    sigma2 = noise_variance / 2
    x = labeling.points.astype(float)
    zero = labeling.labels == 0  # (points, m)
    out = np.empty((y.size, labeling.m))
    for start in range(0, y.size, _CHUNK):
        seg = y[start:start + _CHUNK]
        metric = log_prior[None, :] - (seg[:, None] - x[None, :]) ** 2 / (2 * sigma2)
        for i in range(labeling.m):
            num = logsumexp(np.where(zero[:, i], metric, -np.inf), axis=1)
            den = logsumexp(np.where(zero[:, i], -np.inf, metric), axis=1)
            with np.errstate(invalid="ignore"):
                out[start:start + seg.size, i] = num - den
    return np.clip(np.nan_to_num(out, nan=0.0, posinf=clip, neginf=-clip), -clip, clip)

"""Entropy and rate-loss helpers shared by the shapers and the metrics."""
from __future__ import annotations

import numpy as np


def entropy_bits(probabilities) -> float:
    """H(P) in bits with the 0 log 0 = 0 convention."""
    p = np.asarray(probabilities, dtype=float)
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


def rate_loss(distribution, k: int, N: int) -> float:
    """H(A) - k/N in bits per amplitude."""
    p = np.asarray(distribution, dtype=float)
    if abs(p.sum() - 1.0) > 1e-12:
        raise ValueError(f"distribution sums to {p.sum()}, not 1")
    return entropy_bits(p) - k / N

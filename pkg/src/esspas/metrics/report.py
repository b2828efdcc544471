"""Turn aligned transmit/receive blocks into a ``MetricsReport`` and a CSV row."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from ..pas.labeling import LabelingMap
from ..pas.llr import compute_llrs, pam_priors
from .estimators import (
    DIMS_4D,
    air_n,
    batch_means,
    bit_entropy_terms,
    bmd_rate,
    coded_bit_entropy,
    effective_snr,
    snr_batch_ci,
)

CSV_COLUMNS = (
    "config_hash", "N", "shaper", "power_dbm", "distance_km", "snr_eff_db", "bmd_4d",
    "rate_loss_4d", "air_4d", "samples", "air_ci_4d", "snr_ci_db", "error",
)


@dataclass
class MetricsReport:
    air_n: float
    bmd_rate: float
    rate_loss_amp: float
    effective_snr_db: float
    h_c: float
    h_ci_given_y: Tuple[float, ...]
    sample_count: int
    air_ci: float = math.nan
    snr_ci_db: float = math.nan
    config: Dict[str, object] = field(default_factory=dict)

    @property
    def rate_loss_4d(self) -> float:
        return DIMS_4D * self.rate_loss_amp

    def row(self, **grid) -> Dict[str, object]:
        """One CSV row; ``grid`` supplies config_hash, N, shaper, power and distance."""
        out = {c: "" for c in CSV_COLUMNS}
        out.update(grid)
        out.update(
            snr_eff_db=_fmt(self.effective_snr_db),
            bmd_4d=_fmt(self.bmd_rate),
            rate_loss_4d=_fmt(self.rate_loss_4d),
            air_4d=_fmt(self.air_n),
            samples=self.sample_count,
            air_ci_4d=_fmt(self.air_ci),
            snr_ci_db=_fmt(self.snr_ci_db),
        )
        return out

    def to_dict(self):
        return asdict(self)


def _fmt(v: float) -> str:
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.6f}"


def evaluate(x, y, m: int, amplitude_distribution=None, rate_loss_amp: float = 0.0,
             noise_variance: Optional[float] = None, n_batches: int = 20,
             config: Optional[dict] = None) -> MetricsReport:
    """Metrics for aligned complex symbol blocks ``x`` (sent) and ``y`` (received).

    Both are in PAM units, shape ``(2, n)`` or ``(n,)``. Without a
    ``noise_variance`` the LLRs use the variance measured on the block
    itself (mismatched Gaussian metric). ``amplitude_distribution=None`` is
    uniform signalling with ``m`` bits per real dimension.
    """
    x = np.atleast_2d(np.asarray(x, dtype=complex))
    y = np.atleast_2d(np.asarray(y, dtype=complex))
    lab = LabelingMap(m)
    if noise_variance is None:
        noise_variance = float(np.mean(np.abs(y - x) ** 2))
    noise_variance = max(noise_variance, 1e-12)
    priors = pam_priors(lab, amplitude_distribution)
    n = x.shape[-1]
    # real streams ordered XI, XQ, YI, YQ; column j of ``terms_4d`` is symbol j
    terms_4d = np.zeros(n)
    h_ci = np.zeros(m)
    dims = 0
    for pol in range(x.shape[0]):
        for part in (np.real, np.imag):
            tx = part(x[pol])
            idx = lab.point_index(np.rint(tx).astype(int))
            llr = compute_llrs(part(y[pol]), noise_variance, lab, priors)
            t = bit_entropy_terms(llr, lab.labels[idx])
            h_ci += t.mean(axis=0)
            terms_4d += t.sum(axis=1)
            dims += 1
    h_ci /= dims
    h_c = coded_bit_entropy(amplitude_distribution, m)
    # scale a per-symbol series to 4D so batch means give the AIR CI
    series = DIMS_4D * (h_c - rate_loss_amp - terms_4d / dims)
    _, air_ci = batch_means(series, n_batches)
    return MetricsReport(
        air_n=air_n(h_c, h_ci, rate_loss_amp),
        bmd_rate=bmd_rate(h_c, h_ci),
        rate_loss_amp=rate_loss_amp,
        effective_snr_db=effective_snr(x, y),
        h_c=h_c,
        h_ci_given_y=tuple(float(v) for v in h_ci),
        sample_count=int(x.size),
        air_ci=air_ci,
        snr_ci_db=snr_batch_ci(x, y, n_batches) if np.any(y != x) else 0.0,
        config=dict(config or {}),
    )

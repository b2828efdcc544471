"""PNG figures from sweep CSV rows, written next to the CSV.

Uses the non-interactive Agg backend so it works headless.
"""
from __future__ import annotations

import math
import os
from collections import defaultdict
from typing import Dict, Iterable, List, Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "figure.figsize": (5.0, 3.6),
    "figure.dpi": 120,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 9,
    "legend.fontsize": 8,
    "lines.markersize": 4,
}


def _num(v) -> float:
    try:
        return float(v)
    except (TypeError, ValueError):
        return math.nan


def _series(rows: Iterable[Dict[str, str]], x: str, y: str, group: Optional[str] = "scheme",
            where=None):
    out = defaultdict(list)
    for r in rows:
        if r.get("error") or (where and not where(r)):
            continue
        xv, yv = _num(r.get(x)), _num(r.get(y))
        if math.isnan(xv) or math.isnan(yv):
            continue
        ci = _num(r.get("air_ci_4d" if y == "air_4d" else "snr_ci_db"))
        out[r.get(group, "") if group else ""].append((xv, yv, ci))
    return {k: sorted(v) for k, v in sorted(out.items())}


def _plot(path: str, series, xlabel: str, ylabel: str, title: str = "") -> Optional[str]:
    if not series:
        return None
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for label, pts in series.items():
            xs, ys, ci = zip(*pts)
            err = [0 if math.isnan(c) else c for c in ci]
            ax.errorbar(xs, ys, yerr=err, marker="o", capsize=2, label=label or None)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        if any(series.keys()):
            ax.legend()
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path


def plot_rows(rows: Sequence[Dict[str, str]], out_dir: str, stem: str = "sweep") -> List[str]:
    """Render whichever figures the rows support; returns the written paths.

    AWGN rows give AIR vs SNR. Fiber rows give AIR and effective SNR vs
    launch power (one figure per link length) and, with more than one link
    length, AIR at the best power vs distance.
    """
    os.makedirs(out_dir, exist_ok=True)
    written = []

    def emit(name, series, xl, yl, title=""):
        p = _plot(os.path.join(out_dir, f"{stem}_{name}.png"), series, xl, yl, title)
        if p:
            written.append(p)

    awgn = [r for r in rows if r.get("link") == "awgn"]
    fiber = [r for r in rows if r.get("link") == "fiber"]
    if awgn:
        emit("air_vs_snr", _series(awgn, "snr_db", "air_4d"), "SNR [dB]", "AIR_N [bits/4D-sym]")
    if fiber:
        distances = sorted({_num(r["distance_km"]) for r in fiber if not r.get("error")})
        for d in distances:
            sel = (lambda r, d=d: _num(r["distance_km"]) == d)
            tag = f"{d:g}km"
            emit(f"air_vs_power_{tag}", _series(fiber, "power_dbm", "air_4d", where=sel),
                 "Launch power per channel [dBm]", "AIR_N [bits/4D-sym]", f"{d:g} km")
            emit(f"snr_vs_power_{tag}", _series(fiber, "power_dbm", "snr_eff_db", where=sel),
                 "Launch power per channel [dBm]", "Effective SNR [dB]", f"{d:g} km")
        if len(distances) > 1:
            best = {}
            for r in fiber:
                if r.get("error"):
                    continue
                key = (r["scheme"], _num(r["distance_km"]))
                if key not in best or _num(r["air_4d"]) > _num(best[key]["air_4d"]):
                    best[key] = r
            emit("air_vs_distance", _series(best.values(), "distance_km", "air_4d"),
                 "Distance [km]", "AIR_N at optimum power [bits/4D-sym]")
    return written


def plot_csv(csv_path: str, out_dir: Optional[str] = None) -> List[str]:
    import csv

    with open(csv_path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    stem = os.path.splitext(os.path.basename(csv_path))[0]
    return plot_rows(rows, out_dir or os.path.dirname(os.path.abspath(csv_path)), stem)

"""Grid sweeps with deterministic per-point seeds, resumable CSV output."""
from __future__ import annotations

import csv
import hashlib
import logging
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..metrics.report import CSV_COLUMNS
from .config import ExperimentConfig

log = logging.getLogger(__name__)

GRID_COLUMNS = ("scheme", "link", "snr_db", "spans")
SWEEP_COLUMNS = tuple(dict.fromkeys(GRID_COLUMNS + CSV_COLUMNS))
WORKERS_ENV = "ESSPAS_WORKERS"


class DeskScaleWarning(UserWarning):
    pass


class RateMismatchError(ValueError):
    pass


def point_seed(master_seed: int, key: Tuple) -> int:
    """64-bit seed from ``hash(master_seed, grid point)``; order-insensitive."""
    text = f"{master_seed}|" + "|".join(str(k) for k in key)
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "little")


def grid_points(cfg: ExperimentConfig) -> List[Tuple]:
    if cfg.link == "awgn":
        return [("awgn", float(s)) for s in cfg.snr_db]
    return [("fiber", float(p), int(n)) for n in cfg.spans for p in cfg.power_dbm]


def _fmt_num(v) -> str:
    return repr(float(v)) if v != "" else ""


def _grid_fields(cfg: ExperimentConfig, point: Tuple) -> Dict[str, object]:
    base = {
        "config_hash": cfg.config_hash(),
        "scheme": cfg.label,
        "N": "" if cfg.scheme == "uniform" else cfg.N,
        "shaper": cfg.scheme,
        "link": point[0],
    }
    if point[0] == "awgn":
        base.update(snr_db=_fmt_num(point[1]), power_dbm="", spans="", distance_km=0)
    else:
        base.update(snr_db="", power_dbm=_fmt_num(point[1]), spans=point[2],
                    distance_km=_fmt_num(point[2] * cfg.span_length))
    return base


def _row_key(row: Dict[str, object]) -> Tuple:
    return (str(row["config_hash"]), str(row["snr_db"]), str(row["power_dbm"]), str(row["spans"]))


def run_point(cfg: ExperimentConfig, point: Tuple) -> Dict[str, object]:
    """One grid point as a CSV row; failures become rows with ``error`` set."""
    from .simulate import run_awgn_point, run_fiber_point

    grid = _grid_fields(cfg, point)
    seed = point_seed(cfg.seed, (cfg.config_hash(),) + point)
    try:
        if point[0] == "awgn":
            rep = run_awgn_point(cfg, point[1], seed)
        else:
            rep = run_fiber_point(cfg, point[1], point[2], seed)
    except Exception as exc:  # recorded, the sweep continues
        log.warning("grid point %s failed: %s", point, exc)
        row = {c: "" for c in SWEEP_COLUMNS}
        row.update(grid)
        row["error"] = f"{type(exc).__name__}: {exc}".replace("\n", " ")
        return row
    row = rep.row(**grid)
    return {c: row.get(c, "") for c in SWEEP_COLUMNS}


def _run_point_args(args):
    return run_point(*args)


def read_rows(path: str) -> List[Dict[str, str]]:
    if not os.path.exists(path):
        return []
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def write_rows(path: str, rows: Iterable[Dict[str, object]], columns: Sequence[str] = SWEEP_COLUMNS) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(columns), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({c: r.get(c, "") for c in columns})
    os.replace(tmp, path)


def _append(path: str, row: Dict[str, object]) -> None:
    new = not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(SWEEP_COLUMNS), lineterminator="\n")
        if new:
            w.writeheader()
        w.writerow({c: row.get(c, "") for c in SWEEP_COLUMNS})


def worker_budget(default: int = 1) -> int:
    raw = os.environ.get(WORKERS_ENV)
    if not raw:
        return default
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None


def check_desk_scale(cfg: ExperimentConfig) -> Optional[str]:
    """Warn (and return the message) when the sweep exceeds ``sample_budget``."""
    cost = cfg.estimated_samples()
    if cfg.desk_scale and cost <= cfg.sample_budget:
        return None
    msg = (
        f"{cfg.name}: not desk-scale; estimated cost {cost:.3g} sample-steps "
        f"(budget {cfg.sample_budget:.3g})"
    )
    warnings.warn(msg, DeskScaleWarning, stacklevel=2)
    return msg


def run_sweep(cfg: ExperimentConfig, out_path: Optional[str] = None,
              workers: Optional[int] = None) -> List[Dict[str, object]]:
    """Run every grid point of ``cfg``; one row per point.

    With ``out_path``, rows already present for this config hash (without an
    error) are reused, new rows are appended as they finish and the file is
    finally rewritten in grid order, so interrupted and uninterrupted runs
    produce the same bytes.
    """
    check_desk_scale(cfg)
    points = grid_points(cfg)
    existing = {}
    kept_other = []
    if out_path:
        for r in read_rows(out_path):
            if r.get("error"):
                continue
            if r.get("config_hash") == cfg.config_hash():
                existing[_row_key(r)] = r
            else:
                kept_other.append(r)
    todo, done = [], {}
    for p in points:
        key = _row_key(_grid_fields(cfg, p))
        if key in existing:
            done[p] = existing[key]
        else:
            todo.append(p)
    workers = worker_budget() if workers is None else workers
    if todo:
        log.info("%s: %d of %d grid points to run", cfg.name, len(todo), len(points))
    if workers > 1 and len(todo) > 1:
        with ProcessPoolExecutor(workers) as pool:
            for p, row in zip(todo, pool.map(_run_point_args, [(cfg, p) for p in todo])):
                done[p] = row
                if out_path:
                    _append(out_path, row)
    else:
        for p in todo:
            done[p] = run_point(cfg, p)
            if out_path:
                _append(out_path, done[p])
    rows = [done[p] for p in points]
    if out_path:
        write_rows(out_path, kept_other + rows)
    return rows


def compare_shapers(configs: Sequence[ExperimentConfig], out_path: Optional[str] = None,
                    sweep_dir: Optional[str] = None, workers: Optional[int] = None) -> List[Dict[str, object]]:
    """Run each scheme on the same grid and join the rows.

    All configs must share the FEC rate and target information rate. Adds
    ``delta_air_4d`` and ``delta_snr_db`` against the uniform scheme at the
    same grid point (blank without a uniform config).
    """
    if not configs:
        raise ValueError("nothing to compare")
    ref = configs[0]
    for c in configs[1:]:
        if c.fec_rate != ref.fec_rate:
            raise RateMismatchError(f"FEC rate {c.fec_rate} ({c.label}) differs from {ref.fec_rate}")
        if c.target_rate != ref.target_rate:
            raise RateMismatchError(f"target rate {c.target_rate} ({c.label}) differs from {ref.target_rate}")
        if grid_points(c) != grid_points(ref):
            raise ValueError(f"{c.label} uses a different grid")
    all_rows = []
    for c in configs:
        path = None
        if sweep_dir:
            os.makedirs(sweep_dir, exist_ok=True)
            path = os.path.join(sweep_dir, f"{c.label.replace(' ', '_').replace('=', '')}.csv")
        all_rows.append(run_sweep(c, path, workers))
    uniform = next((rows for c, rows in zip(configs, all_rows) if c.scheme == "uniform"), None)
    columns = SWEEP_COLUMNS + ("delta_air_4d", "delta_snr_db")
    joined = []
    for i, _ in enumerate(grid_points(ref)):
        for rows in all_rows:
            r = dict(rows[i])
            r["delta_air_4d"] = r["delta_snr_db"] = ""
            if uniform is not None and len(configs) > 1:
                u = uniform[i]
                if not r.get("error") and not u.get("error"):
                    r["delta_air_4d"] = f"{float(r['air_4d']) - float(u['air_4d']):.6f}"
                    r["delta_snr_db"] = f"{float(r['snr_eff_db']) - float(u['snr_eff_db']):.6f}"
            joined.append(r)
    if out_path:
        write_rows(out_path, joined, columns)
    return joined

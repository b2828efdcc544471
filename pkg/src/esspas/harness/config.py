"""Flat ``key = value`` experiment configuration with ``include`` support."""
from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, fields, replace
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from ..shaping.rates import ShapingError, as_fraction

PRESET_DIR = os.path.join(os.path.dirname(__file__), "presets")


class ConfigError(ValueError):
    pass


def _resolve(path: str) -> str:
    if os.path.exists(path):
        return path
    cand = os.path.join(PRESET_DIR, path if path.endswith(".cfg") else path + ".cfg")
    if os.path.exists(cand):
        return cand
    raise ConfigError(f"config {path!r} not found (also looked in {PRESET_DIR})")


def read_config(path: str, _seen: Optional[Tuple[str, ...]] = None) -> Dict[str, str]:
    """Parse a config file; ``include = other.cfg`` merges first, later keys win.

    Include paths are resolved relative to the including file, then against
    the shipped presets.
    """
    path = os.path.abspath(_resolve(path))
    seen = _seen or ()
    if path in seen:
        raise ConfigError(f"include cycle through {path}")
    out: Dict[str, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            if key == "include":
                inc = os.path.join(os.path.dirname(path), value)
                out.update(read_config(inc if os.path.exists(inc) else value, seen + (path,)))
            else:
                out[key.replace("-", "_")] = value
    return out


def _floats(v: str) -> Tuple[float, ...]:
    return tuple(float(s) for s in v.replace(";", ",").split(",") if s.strip())


def _ints(v: str) -> Tuple[int, ...]:
    return tuple(int(s) for s in v.replace(";", ",").split(",") if s.strip())


def _bool(v: str) -> bool:
    if v.lower() in ("1", "true", "yes", "on"):
        return True
    if v.lower() in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {v!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    """One scheme on one grid.

    Rates are per real dimension: ``target_rate = 2.5`` is 10 bits/4D.
    ``spans`` lists the link lengths (in spans) of a distance sweep.
    """

    name: str = "experiment"
    scheme: str = "ess"
    N: int = 200
    m: int = 4
    target_rate: Fraction = Fraction(5, 2)
    fec_rate: Fraction = Fraction(5, 6)
    fec: str = "none"
    link: str = "awgn"
    snr_db: Tuple[float, ...] = (14.0, 16.0, 18.0)
    power_dbm: Tuple[float, ...] = (0.0,)
    spans: Tuple[int, ...] = (10,)
    span_length: float = 80.0
    alpha: float = 0.2
    D: float = 17.0
    gamma_nl: float = 1.3
    wavelength: float = 1550.0
    gain_db: Optional[float] = None
    noise_figure: float = 5.0
    ase: bool = True
    channels: int = 1
    spacing: float = 50e9
    symbol_rate: float = 45e9
    roll_off: float = 0.1
    rrc_span: int = 256
    sps: int = 16
    rx_sps: int = 2
    step_km: float = 0.1
    nl_phase_max: Optional[float] = None
    precision: str = "complex128"
    symbols: int = 100_000
    seed: int = 1
    sample_budget: float = 5e9
    desk_scale: bool = True
    schemes: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.scheme not in ("ess", "ccdm", "uniform"):
            raise ConfigError(f"scheme must be ess, ccdm or uniform, got {self.scheme!r}")
        if self.link not in ("awgn", "fiber"):
            raise ConfigError(f"link must be awgn or fiber, got {self.link!r}")
        if self.precision not in ("complex64", "complex128"):
            raise ConfigError("precision must be complex64 or complex128")
        try:
            self.uniform_m if self.scheme == "uniform" else self.shaping_plan()
        except ShapingError as exc:
            raise ConfigError(str(exc)) from None

    @property
    def uniform_m(self) -> int:
        """Bits per real dimension of the uniform format at the same FEC and info rate."""
        m = self.target_rate / self.fec_rate
        if m.denominator != 1:
            raise ShapingError(
                f"uniform signalling cannot hit rate {self.target_rate} with FEC rate {self.fec_rate}"
            )
        return int(m)

    @property
    def label(self) -> str:
        return "uniform" if self.scheme == "uniform" else f"{self.scheme.upper()} N={self.N}"

    def shaping_plan(self):
        from ..shaping.rates import plan_rate

        return plan_rate(self.target_rate, self.m, self.fec_rate, self.N, shaper=None)

    def canonical(self) -> str:
        parts = []
        for f in fields(self):
            if f.name in ("name", "schemes"):
                continue
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = ",".join(str(x) for x in v)
            parts.append(f"{f.name}={v}")
        return "\n".join(parts)

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()[:12]

    def with_scheme(self, spec: str) -> "ExperimentConfig":
        """``ess:200``, ``ccdm:3600`` or ``uniform``."""
        kind, _, n = spec.strip().partition(":")
        kind = kind.strip().lower()
        if kind == "uniform":
            return replace(self, scheme="uniform", schemes=())
        if not n:
            raise ConfigError(f"scheme {spec!r} needs a blocklength, e.g. ess:200")
        return replace(self, scheme=kind, N=int(n), schemes=())

    def expand(self) -> List["ExperimentConfig"]:
        """One config per entry of ``schemes`` (or just this one)."""
        return [self.with_scheme(s) for s in self.schemes] if self.schemes else [self]

    def estimated_samples(self) -> float:
        """Rough work estimate: samples times split steps across the sweep."""
        if self.link == "awgn":
            return float(self.symbols * len(self.snr_db))
        steps = self.span_length / self.step_km if self.nl_phase_max is None else 30
        fs_sps = self.sps * max(1, self.channels) * self.spacing / self.symbol_rate
        return float(self.symbols * fs_sps * steps * sum(self.spans) * len(self.power_dbm))


_CONVERTERS = {
    "N": int, "m": int, "channels": int, "rrc_span": int, "sps": int, "rx_sps": int,
    "symbols": lambda v: int(float(v)), "seed": int,
    "target_rate": as_fraction, "fec_rate": as_fraction,
    "snr_db": _floats, "power_dbm": _floats, "spans": _ints,
    "ase": _bool, "desk_scale": _bool,
    "nl_phase_max": lambda v: None if v.lower() == "none" else float(v),
    "gain_db": lambda v: None if v.lower() == "none" else float(v),
    "schemes": lambda v: tuple(s.strip() for s in v.split(",") if s.strip()),
    "name": str, "scheme": str.lower, "fec": str, "link": str.lower, "precision": str.lower,
}


def config_from_dict(values: Dict[str, str]) -> ExperimentConfig:
    known = {f.name for f in fields(ExperimentConfig)}
    kwargs = {}
    for key, raw in values.items():
        if key not in known:
            raise ConfigError(f"unknown config key {key!r}")
        conv = _CONVERTERS.get(key, float)
        try:
            kwargs[key] = conv(raw) if isinstance(raw, str) else raw
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"bad value for {key}: {raw!r} ({exc})") from None
    return ExperimentConfig(**kwargs)


def load_config(path: str, overrides: Optional[Dict[str, str]] = None) -> ExperimentConfig:
    values = read_config(path)
    values.update(overrides or {})
    return config_from_dict(values)

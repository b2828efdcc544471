"""Rate bookkeeping for probabilistic amplitude shaping at a fixed FEC rate."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple, Union

RateLike = Union[Fraction, int, str, float]


class ShapingError(ValueError):
    """Raised for infeasible shaping parameters or undecodable blocks."""


def as_fraction(value: RateLike) -> Fraction:
    """Convert a rate given as ``"5/6"``, ``"2.5"``, int or Fraction to an exact Fraction.

    Floats are converted through their shortest decimal repr so that ``2.5``
    and ``0.8333`` do not drag binary rounding noise into rational checks.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


@dataclass(frozen=True)
class AmplitudeAlphabet:
    """One-sided half of a 2^m-PAM constellation: ``{1, 3, ..., 2^m - 1}``."""

    m: int
    amplitudes: Tuple[int, ...] = field(init=False)

    def __post_init__(self):
        if self.m < 2:
            raise ShapingError(f"need m >= 2 bit levels, got {self.m}")
        object.__setattr__(self, "amplitudes", tuple(range(1, 2**self.m, 2)))

    def __len__(self):
        return len(self.amplitudes)

    def __iter__(self):
        return iter(self.amplitudes)

    @property
    def max_amplitude(self) -> int:
        return self.amplitudes[-1]


def amplitude_levels(alphabet) -> Tuple[int, ...]:
    """Normalise an alphabet argument to a tuple of odd increasing amplitudes.

    Accepts an :class:`AmplitudeAlphabet` or any sequence of odd positive
    integers (small non-power-of-two alphabets are handy in tests).
    """
    levels = tuple(int(a) for a in alphabet)
    if not levels:
        raise ShapingError("empty alphabet")
    if any(a <= 0 or a % 2 == 0 for a in levels):
        raise ShapingError(f"amplitudes must be odd positive integers, got {levels}")
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise ShapingError(f"amplitudes must be strictly increasing, got {levels}")
    return levels


def gamma(m: int, fec_rate: RateLike) -> Fraction:
    """Fraction of information bits per 1D symbol carried on the sign bits.

    ``gamma = m (R_c - 1) + 1``, exact. Raises when the FEC rate is too low
    for PAS with ``m`` bit levels (gamma <= 0).
    """
    rc = as_fraction(fec_rate)
    if not 0 < rc <= 1:
        raise ShapingError(f"FEC rate must lie in (0, 1], got {rc}")
    g = m * (rc - 1) + 1
    if g <= 0:
        raise ShapingError(
            f"gamma = {g} <= 0: FEC rate {rc} too low for PAS with m={m}"
        )
    return g


@dataclass(frozen=True)
class ShapingConfig:
    """All rate-adaptation scalars of one shaped (or uniform) operating point.

    ``info_rate`` is the rate actually achieved, ``k/N + gamma``; it is below
    ``target_rate`` whenever ``N * R_s`` is not an integer.
    """

    N: int
    k: int
    m: int
    fec_rate: Fraction
    gamma: Fraction
    target_rate: Fraction
    e_max: Optional[int] = None
    composition: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if self.e_max is not None and self.composition is not None:
            raise ShapingError("a config is either ESS (e_max) or CCDM (composition), not both")
        if self.gamma != self.m * (self.fec_rate - 1) + 1:
            raise ShapingError("gamma inconsistent with m and fec_rate")
        if self.composition is not None and sum(self.composition) != self.N:
            raise ShapingError("composition does not sum to N")

    @property
    def shaping_rate(self) -> Fraction:
        return Fraction(self.k, self.N)

    @property
    def info_rate(self) -> Fraction:
        return self.shaping_rate + self.gamma

    @property
    def rate_exact(self) -> bool:
        return self.info_rate == self.target_rate

    @property
    def shaper(self) -> str:
        if self.e_max is not None:
            return "ess"
        if self.composition is not None:
            return "ccdm"
        return "none"

    @property
    def extra_bits(self) -> Fraction:
        """Information bits on the signs per block of N amplitudes (gamma * N)."""
        return self.gamma * self.N

    def describe(self) -> str:
        lines = [
            f"m            = {self.m}",
            f"fec_rate     = {self.fec_rate}",
            f"gamma        = {self.gamma} ({float(self.gamma):.4f} bits/1D-sym)",
            f"N            = {self.N}",
            f"k            = {self.k}",
            f"R_s = k/N    = {self.shaping_rate} ({float(self.shaping_rate):.4f} bits/amp)",
            f"target R     = {self.target_rate} ({float(self.target_rate):.4f} bits/1D-sym)",
            f"achieved R   = {self.info_rate} ({float(self.info_rate):.4f} bits/1D-sym)",
        ]
        if not self.rate_exact:
            lines.append("note         : N*R_s not integral, k rounded down")
        if self.e_max is not None:
            lines.append(f"e_max        = {self.e_max}")
        if self.composition is not None:
            lines.append(f"composition  = {','.join(map(str, self.composition))}")
        return "\n".join(lines)


def plan_rate(
    target_info_rate: RateLike,
    m: int,
    fec_rate: RateLike,
    N: int,
    shaper: Optional[str] = None,
) -> ShapingConfig:
    """Choose the shaper input length ``k`` for a target information rate.

    ``R_s = R - gamma`` and ``k = floor(N R_s)``. With ``shaper="ess"`` the
    smallest sufficient maximum energy is attached, with ``shaper="ccdm"`` a
    minimum-energy composition; ``None`` leaves the shaper unbound.
    """
    target = as_fraction(target_info_rate)
    rc = as_fraction(fec_rate)
    if N < 1:
        raise ShapingError(f"blocklength must be >= 1, got {N}")
    if not target < m:
        raise ShapingError(f"target rate {target} must be below m={m}")
    g = gamma(m, rc)
    rs = target - g
    k = math.floor(N * rs)
    if k <= 0:
        raise ShapingError(f"k = {k} <= 0 for R_s = {rs}, N = {N}")
    if k > N * (m - 1):
        raise ShapingError(f"R_s = {rs} exceeds the uniform amplitude entropy {m - 1}")

    e_max = None
    composition = None
    if shaper == "ess":
        from .ess import min_emax_for_bits

        e_max = min_emax_for_bits(AmplitudeAlphabet(m), N, k)
    elif shaper == "ccdm":
        from .ccdm import ccdm_composition_for_bits

        composition = ccdm_composition_for_bits(AmplitudeAlphabet(m), N, k).counts
    elif shaper not in (None, "none", "uniform"):
        raise ShapingError(f"unknown shaper {shaper!r}")
    return ShapingConfig(
        N=N, k=k, m=m, fec_rate=rc, gamma=g, target_rate=target,
        e_max=e_max, composition=composition,
    )


def sign_bit_budget(m: int, fec_rate: RateLike, n_symbols=1) -> Tuple[Fraction, Fraction, Fraction]:
    """Return ``(parity, extra, signs)`` bit counts for ``n_symbols`` 1D symbols.

    parity = n (1 - R_c) m and extra = n (m R_c - m + 1); the two always add
    up to the ``n`` available sign bits. ``extra <= 0`` flags a rate at which
    PAS cannot operate (see :func:`gamma`).
    """
    rc = as_fraction(fec_rate)
    parity = n_symbols * (1 - rc) * m
    extra = n_symbols * (m * rc - m + 1)
    return parity, extra, Fraction(n_symbols)


def uniform_info_rate(m: int, fec_rate: RateLike) -> Fraction:
    """Information rate of uniform BICM: ``m R_c`` bits/1D-sym."""
    return m * as_fraction(fec_rate)


def bits_to_int(bits: Sequence[int]) -> int:
    """Read a bit sequence most-significant bit first."""
    import numpy as np

    arr = np.asarray(bits, dtype=np.uint8)
    if arr.size == 0:
        return 0
    if arr.max() > 1:
        raise ShapingError("bit values must be 0 or 1")
    return int((arr + ord("0")).tobytes().decode("ascii"), 2)


def int_to_bits(value: int, length: int):
    """Write ``value`` as ``length`` bits, most-significant bit first."""
    import numpy as np

    if value < 0 or value >> length:
        raise ShapingError(f"{value} does not fit in {length} bits")
    if length == 0:
        return np.zeros(0, dtype=np.uint8)
    s = format(value, f"0{length}b")
    return np.frombuffer(s.encode("ascii"), dtype=np.uint8) - ord("0")

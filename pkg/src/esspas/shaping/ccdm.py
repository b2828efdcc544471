"""Constant-composition distribution matching by exact multiset-permutation ranking.

The matcher enumerates all permutations of a fixed amplitude composition in
lexicographic order and maps a ``k``-bit index to one of them. This is the
exact-arithmetic counterpart of arithmetic-coding CCDM: same codebook
family, perfectly invertible.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .rates import ShapingError, amplitude_levels, bits_to_int, int_to_bits


@dataclass(frozen=True)
class Composition:
    """Occurrence count per amplitude; ``sum(counts) == N``."""

    counts: Tuple[int, ...]
    amplitudes: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        object.__setattr__(self, "amplitudes", amplitude_levels(self.amplitudes))
        if len(self.counts) != len(self.amplitudes):
            raise ShapingError("composition and alphabet sizes differ")
        if any(c < 0 for c in self.counts):
            raise ShapingError(f"negative count in composition {self.counts}")
        if self.N < 1:
            raise ShapingError("composition must contain at least one amplitude")

    @property
    def N(self) -> int:
        return sum(self.counts)

    @property
    def energy(self) -> int:
        """Block energy, identical for every sequence of the composition."""
        return sum(c * a * a for c, a in zip(self.counts, self.amplitudes))

    @property
    def distribution(self) -> np.ndarray:
        return np.array(self.counts, dtype=float) / self.N

    @property
    def num_bits(self) -> int:
        return ccdm_num_bits(self)


def _counts(composition) -> Tuple[int, ...]:
    if isinstance(composition, Composition):
        return composition.counts
    counts = tuple(int(c) for c in composition)
    if any(c < 0 for c in counts):
        raise ShapingError(f"negative count in composition {counts}")
    return counts


def ccdm_count(composition) -> int:
    """Number of sequences with the given composition: N! / prod(n_a!)."""
    counts = _counts(composition)
    total = 1
    placed = 0
    for c in counts:
        placed += c
        total *= math.comb(placed, c)
    return total


def ccdm_num_bits(composition) -> int:
    return ccdm_count(composition).bit_length() - 1


def _maxwell_boltzmann_seed(levels, N: int, k: int):
    """Integer counts near the MB distribution whose entropy is k/N bits."""
    sq = np.array(levels, dtype=float) ** 2
    target = k / N

    def dist(lam):
        w = np.exp(-lam * (sq - sq[0]))
        return w / w.sum()

    def entropy(p):
        p = p[p > 0]
        return float(-(p * np.log2(p)).sum())

    if target >= math.log2(len(levels)):
        p = dist(0.0)
    else:
        lo, hi = 0.0, 1.0
        while entropy(dist(hi)) > target:
            hi *= 2
            if hi > 1e6:
                break
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            if entropy(dist(mid)) > target:
                lo = mid
            else:
                hi = mid
        p = dist(lo)
    raw = N * p
    counts = np.floor(raw).astype(int)
    short = N - counts.sum()
    for i in np.argsort(-(raw - counts), kind="stable")[:short]:
        counts[i] += 1
    return [int(c) for c in counts]


def _moves(size: int, adjacent_only: bool):
    for i in range(size):
        for j in range(size):
            if i != j and (not adjacent_only or abs(i - j) == 1):
                yield i, j


def _apply(counts, mult, src, dst):
    # moving one occurrence src -> dst scales the multinomial by n_src / (n_dst + 1)
    new_mult = mult * counts[src] // (counts[dst] + 1)
    new = list(counts)
    new[src] -= 1
    new[dst] += 1
    return new, new_mult


def ccdm_composition_for_bits(alphabet, N: int, k: int) -> Composition:
    """Minimum-energy composition whose multinomial indexes at least ``k`` bits.

    Seeds with a quantised Maxwell-Boltzmann distribution, repairs the seed
    until it carries ``k`` bits, then applies energy-reducing local moves
    (single count shifts between adjacent amplitudes, and pairs of adjacent
    shifts) until none keeps the bit constraint.
    """
    levels = amplitude_levels(alphabet)
    size = len(levels)
    if k < 0:
        raise ShapingError(f"k must be nonnegative, got {k}")
    need = 1 << k
    balanced = [N // size + (1 if i < N % size else 0) for i in range(size)]
    if ccdm_count(balanced) < need:
        raise ShapingError(f"no composition of N={N} over {size} amplitudes reaches {k} bits")

    sq = [a * a for a in levels]
    counts = _maxwell_boltzmann_seed(levels, N, k)
    mult = ccdm_count(counts)

    # repair: climb in bits per unit of energy until feasible
    while mult < need:
        best = None
        # adjacent shifts first; a staircase like (3, 2, 1, 0) needs a longer jump
        for adjacent in (True, False):
            for src, dst in _moves(size, adjacent_only=adjacent):
                if counts[src] <= counts[dst] + 1:
                    continue
                gain = math.log2(counts[src] / (counts[dst] + 1))
                cost = sq[dst] - sq[src]
                score = gain / cost if cost > 0 else math.inf
                if best is None or score > best[0]:
                    best = (score, src, dst)
            if best is not None:
                break
        if best is None:  # pragma: no cover - balanced composition is feasible
            raise ShapingError("composition repair stalled")
        counts, mult = _apply(counts, mult, best[1], best[2])

    # descend: energy-reducing moves that keep the bit constraint
    while True:
        best = None
        for src, dst in _moves(size, adjacent_only=True):
            delta = sq[dst] - sq[src]
            if delta >= 0 or counts[src] == 0:
                continue
            _, new_mult = _apply(counts, mult, src, dst)
            if new_mult >= need and (best is None or delta < best[0]):
                best = (delta, ((src, dst),))
        if best is None:
            for down in _moves(size, adjacent_only=True):
                if sq[down[1]] >= sq[down[0]] or counts[down[0]] == 0:
                    continue
                mid, mid_mult = _apply(counts, mult, *down)
                for up in _moves(size, adjacent_only=True):
                    if sq[up[1]] <= sq[up[0]] or mid[up[0]] == 0:
                        continue
                    delta = sq[down[1]] - sq[down[0]] + sq[up[1]] - sq[up[0]]
                    if delta >= 0:
                        continue
                    _, new_mult = _apply(mid, mid_mult, *up)
                    if new_mult >= need and (best is None or delta < best[0]):
                        best = (delta, (down, up))
        if best is None:
            break
        for src, dst in best[1]:
            counts, mult = _apply(counts, mult, src, dst)
    return Composition(tuple(counts), levels)


def ccdm_encode_index(composition: Composition, index: int) -> np.ndarray:
    """The ``index``-th permutation of the composition in lexicographic order."""
    counts = list(composition.counts)
    total = ccdm_count(counts)
    if not 0 <= index < total:
        raise ShapingError(f"index {index} outside [0, {total})")
    out = np.empty(composition.N, dtype=np.int64)
    remaining = composition.N
    for n in range(composition.N):
        for i, a in enumerate(composition.amplitudes):
            if not counts[i]:
                continue
            # sequences starting with amplitude i: total * n_i / remaining
            c = total * counts[i] // remaining
            if index < c:
                out[n] = a
                counts[i] -= 1
                total = c
                break
            index -= c
        remaining -= 1
    return out


def ccdm_decode_index(composition: Composition, amplitudes: Sequence[int]) -> int:
    """Lexicographic rank of a permutation of the composition."""
    if len(amplitudes) != composition.N:
        raise ShapingError(f"expected {composition.N} amplitudes, got {len(amplitudes)}")
    lookup = {a: i for i, a in enumerate(composition.amplitudes)}
    seen = [0] * len(composition.amplitudes)
    for n, a in enumerate(amplitudes):
        pos = lookup.get(int(a))
        if pos is None:
            raise ShapingError(f"amplitude {a} at position {n} not in alphabet")
        seen[pos] += 1
    if tuple(seen) != composition.counts:
        raise ShapingError(
            f"histogram {tuple(seen)} does not match composition {composition.counts}"
        )
    counts = list(composition.counts)
    total = ccdm_count(counts)
    remaining = composition.N
    index = 0
    for a in amplitudes:
        pos = lookup[int(a)]
        for i in range(pos):
            if counts[i]:
                index += total * counts[i] // remaining
        total = total * counts[pos] // remaining
        counts[pos] -= 1
        remaining -= 1
    return index


def ccdm_encode(composition: Composition, bits: Sequence[int]) -> np.ndarray:
    """Map ``floor(log2 ccdm_count)`` bits (MSB first) to a constant-composition block."""
    k = ccdm_num_bits(composition)
    if len(bits) != k:
        raise ShapingError(f"CCDM input must be {k} bits, got {len(bits)}")
    return ccdm_encode_index(composition, bits_to_int(bits))


def ccdm_decode(composition: Composition, amplitudes: Sequence[int]) -> np.ndarray:
    """Inverse of :func:`ccdm_encode`; rejects histogram mismatch and index overflow."""
    k = ccdm_num_bits(composition)
    index = ccdm_decode_index(composition, amplitudes)
    if index >> k:
        raise ShapingError(f"sequence rank {index} >= 2^{k}: not in the used subset")
    return int_to_bits(index, k)

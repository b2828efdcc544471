"""Enumerative sphere shaping over a bounded-energy amplitude trellis.

Energies of sequences of odd amplitudes at position ``n`` always lie on the
grid ``e = n + 8 j`` (odd squares are 1 mod 8), so every table below is
indexed by ``(n, j)`` rather than by raw energy. An amplitude ``a`` advances
``j`` by ``(a*a - 1) // 8``.

All path counts are Python integers; nothing here is finite precision.
"""
from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, TextIO

import numpy as np

from .rates import ShapingError, amplitude_levels, bits_to_int, int_to_bits


def _grid_steps(levels):
    return tuple((a * a - 1) // 8 for a in levels)


def _jmax(e_max: int, n: int) -> int:
    # largest grid index at position n still within the energy bound
    return (e_max - n) // 8


class EnergyTrellis:
    """Suffix-count table of all length-N amplitude sequences with energy <= e_max.

    ``counts[n][j]`` is the number of ways to complete a prefix of length ``n``
    and energy ``n + 8 j`` without exceeding ``e_max``. The table is built once
    and never mutated afterwards, so one trellis can serve many encoders.
    """

    def __init__(self, alphabet, N: int, e_max: int):
        levels = amplitude_levels(alphabet)
        if N < 1:
            raise ShapingError(f"blocklength must be >= 1, got {N}")
        if e_max < N:
            raise ShapingError(f"e_max={e_max} < N={N}: shaping set is empty")
        self.amplitudes = levels
        self.N = N
        self.e_max = e_max
        self.steps = _grid_steps(levels)
        self.counts: List[List[int]] = [None] * (N + 1)
        self.counts[N] = [1] * (_jmax(e_max, N) + 1)
        for n in range(N - 1, -1, -1):
            nxt = self.counts[n + 1]
            width = len(nxt)
            row = []
            for j in range(_jmax(e_max, n) + 1):
                total = 0
                for s in self.steps:
                    if j + s >= width:
                        break
                    total += nxt[j + s]
                row.append(total)
            self.counts[n] = row
        self.position = {a: i for i, a in enumerate(levels)}
        self._forward = None
        self._occurrences = None

    def __repr__(self):
        return (
            f"EnergyTrellis(amplitudes={self.amplitudes}, N={self.N}, "
            f"e_max={self.e_max}, total={self.total})"
        )

    @property
    def total(self) -> int:
        """Number of sequences in the shaping set, T(0, 0)."""
        return self.counts[0][0]

    @property
    def num_bits(self) -> int:
        return ess_num_bits(self)

    def count(self, n: int, energy: int) -> int:
        """T(n, energy); zero off the grid or above the bound."""
        if not 0 <= n <= self.N or (energy - n) % 8 or energy < n:
            return 0
        j = (energy - n) // 8
        row = self.counts[n]
        return row[j] if j < len(row) else 0

    def _child(self, n: int, j: int, s: int) -> int:
        row = self.counts[n + 1]
        return row[j + s] if j + s < len(row) else 0

    def forward_counts(self) -> List[List[int]]:
        """Number of prefixes reaching each state; F(0, 0) = 1."""
        if self._forward is None:
            fwd = [[0] * len(row) for row in self.counts]
            fwd[0][0] = 1
            for n in range(self.N):
                width = len(fwd[n + 1])
                for j, f in enumerate(fwd[n]):
                    if not f:
                        continue
                    for s in self.steps:
                        if j + s >= width:
                            break
                        fwd[n + 1][j + s] += f
            self._forward = fwd
        return self._forward

    def occurrence_counts(self) -> List[List[List[int]]]:
        """``occ[n][j][i]``: occurrences of amplitude ``i`` over all suffixes of state (n, j)."""
        if self._occurrences is None:
            size = len(self.amplitudes)
            occ: List[List[List[int]]] = [None] * (self.N + 1)
            occ[self.N] = [[0] * size for _ in self.counts[self.N]]
            for n in range(self.N - 1, -1, -1):
                nxt = occ[n + 1]
                width = len(nxt)
                rows = []
                for j in range(len(self.counts[n])):
                    acc = [0] * size
                    for i, s in enumerate(self.steps):
                        if j + s >= width:
                            break
                        acc[i] += self.counts[n + 1][j + s]
                        child = nxt[j + s]
                        for b in range(size):
                            acc[b] += child[b]
                    rows.append(acc)
                occ[n] = rows
            self._occurrences = occ
        return self._occurrences

    def export(self, fh: TextIO, include_zero: bool = False) -> int:
        """Write the table as ``n,e,count`` rows (decimal counts); returns rows written."""
        fh.write("n,e,count\n")
        rows = 0
        for n, row in enumerate(self.counts):
            for j, c in enumerate(row):
                if c or include_zero:
                    fh.write(f"{n},{n + 8 * j},{c}\n")
                    rows += 1
        return rows


def build_trellis(alphabet, N: int, e_max: int) -> EnergyTrellis:
    """Build the bounded-energy counting trellis."""
    return EnergyTrellis(alphabet, N, e_max)


def sequence_count(alphabet, N: int, e_max: int) -> int:
    """T(0, 0) without keeping the full table (one row of memory)."""
    levels = amplitude_levels(alphabet)
    if e_max < N:
        return 0
    steps = _grid_steps(levels)
    row = [1] * (_jmax(e_max, N) + 1)
    for n in range(N - 1, -1, -1):
        width = len(row)
        # only grid points reachable from the origin matter at position n
        top = min(_jmax(e_max, n), n * steps[-1])
        new = []
        for j in range(top + 1):
            total = 0
            for s in steps:
                if j + s >= width:
                    break
                total += row[j + s]
            new.append(total)
        row = new
    return row[0]


def ess_num_bits(trellis: EnergyTrellis) -> int:
    """floor(log2 T(0, 0)), exact."""
    return trellis.total.bit_length() - 1


def min_emax_for_bits(alphabet, N: int, k: int) -> int:
    """Smallest energy bound on the grid ``N + 8 j`` that indexes at least ``k`` bits."""
    levels = amplitude_levels(alphabet)
    if k < 0:
        raise ShapingError(f"k must be nonnegative, got {k}")
    need = 1 << k
    hi = N * (levels[-1] ** 2 - 1) // 8
    if sequence_count(levels, N, N + 8 * hi) < need:
        raise ShapingError(
            f"even unbounded energy yields fewer than {k} bits at N={N}"
        )
    lo = 0
    # T(0,0) is nondecreasing in the bound, so bisect over the grid index
    while lo < hi:
        mid = (lo + hi) // 2
        if sequence_count(levels, N, N + 8 * mid) >= need:
            hi = mid
        else:
            lo = mid + 1
    return N + 8 * lo


def ess_encode_index(trellis: EnergyTrellis, index: int) -> np.ndarray:
    """The ``index``-th sequence of the shaping set in lexicographic order."""
    if not 0 <= index < trellis.total:
        raise ShapingError(f"index {index} outside [0, {trellis.total})")
    out = []
    j = 0
    choices = tuple(zip(trellis.amplitudes, trellis.steps))
    for nxt in trellis.counts[1:]:
        width = len(nxt)
        for a, s in choices:
            c = nxt[j + s] if j + s < width else 0
            if index < c:
                out.append(a)
                j += s
                break
            index -= c
        else:  # pragma: no cover - unreachable when index < total
            raise ShapingError("trellis walk fell off the table")
    return np.array(out, dtype=np.int64)


def ess_decode_index(trellis: EnergyTrellis, amplitudes: Sequence[int]) -> int:
    """Lexicographic rank of a sequence inside the shaping set."""
    if len(amplitudes) != trellis.N:
        raise ShapingError(f"expected {trellis.N} amplitudes, got {len(amplitudes)}")
    lookup = trellis.position
    index = 0
    j = 0
    counts = trellis.counts
    for n, a in enumerate(amplitudes):
        pos = lookup.get(int(a))
        if pos is None:
            raise ShapingError(f"amplitude {a} at position {n} not in alphabet")
        nxt = counts[n + 1]
        width = len(nxt)
        for s in trellis.steps[:pos]:
            if j + s < width:
                index += nxt[j + s]
        j += trellis.steps[pos]
        if j >= width:
            energy = sum(int(x) ** 2 for x in amplitudes)
            raise ShapingError(
                f"sequence energy {energy} exceeds e_max={trellis.e_max}"
            )
    return index


def ess_encode(trellis: EnergyTrellis, bits: Sequence[int]) -> np.ndarray:
    """Map ``k = ess_num_bits`` input bits (MSB first) to an amplitude block."""
    k = ess_num_bits(trellis)
    if len(bits) != k:
        raise ShapingError(f"ESS input must be {k} bits, got {len(bits)}")
    return ess_encode_index(trellis, bits_to_int(bits))


def ess_decode(trellis: EnergyTrellis, amplitudes: Sequence[int]) -> np.ndarray:
    """Inverse of :func:`ess_encode`.

    Raises :class:`ShapingError` for sequences above the energy bound and for
    valid sequences whose rank is not reachable from ``k`` bits.
    """
    k = ess_num_bits(trellis)
    index = ess_decode_index(trellis, amplitudes)
    if index >> k:
        raise ShapingError(f"sequence rank {index} >= 2^{k}: not in the used subset")
    return int_to_bits(index, k)


def ess_encode_blocks(trellis: EnergyTrellis, bits: np.ndarray) -> np.ndarray:
    """Encode a ``(blocks, k)`` bit array into a ``(blocks, N)`` amplitude array."""
    bits = np.asarray(bits, dtype=np.uint8).reshape(-1, ess_num_bits(trellis))
    return np.stack([ess_encode(trellis, row) for row in bits]) if len(bits) else np.zeros(
        (0, trellis.N), dtype=np.int64
    )


def ess_amplitude_distribution(
    trellis: EnergyTrellis, used_only: bool = False, exact: bool = False, k=None
):
    """Time-averaged amplitude marginal of the shaping set.

    By default every one of the T(0, 0) sequences is equally likely. With
    ``used_only`` only the ``2^k`` lexicographically first sequences (the ones
    the encoder can emit) are counted; ``k`` defaults to ``ess_num_bits``.
    ``exact`` returns Fractions.
    """
    size = len(trellis.amplitudes)
    used = 1 << (ess_num_bits(trellis) if k is None else k)
    if used > trellis.total:
        raise ShapingError(f"2^{k} exceeds the {trellis.total} sequences of the trellis")
    if used_only and trellis.total != used:
        numer, denom = _used_occurrences(trellis, used)
    else:
        fwd = trellis.forward_counts()
        numer = [0] * size
        for n in range(trellis.N):
            nxt = trellis.counts[n + 1]
            width = len(nxt)
            for j, f in enumerate(fwd[n]):
                if not f:
                    continue
                for i, s in enumerate(trellis.steps):
                    if j + s >= width:
                        break
                    numer[i] += f * nxt[j + s]
        denom = trellis.N * trellis.total
    probs = [Fraction(c, denom) for c in numer]
    assert sum(probs) == 1
    if exact:
        return probs
    return np.array([float(p) for p in probs])


def _used_occurrences(trellis: EnergyTrellis, used: int):
    """Amplitude occurrence counts over the first ``used`` sequences."""
    occ = trellis.occurrence_counts()
    size = len(trellis.amplitudes)
    numer = [0] * size
    prefix = [0] * size
    remaining = used
    j = 0
    for n in range(trellis.N):
        for i, s in enumerate(trellis.steps):
            c = trellis._child(n, j, s)
            if remaining >= c:
                # whole subtree below prefix + amplitude i lies inside the used range
                if c:
                    child = occ[n + 1][j + s]
                    for b in range(size):
                        numer[b] += c * prefix[b] + child[b]
                    numer[i] += c
                remaining -= c
            else:
                prefix[i] += 1
                j += s
                break
        if remaining == 0:
            break
    return numer, trellis.N * used


def ess_average_energy(trellis: EnergyTrellis) -> Fraction:
    """Mean per-block energy over all sequences in the shaping set."""
    probs = ess_amplitude_distribution(trellis, exact=True)
    return trellis.N * sum(p * a * a for p, a in zip(probs, trellis.amplitudes))

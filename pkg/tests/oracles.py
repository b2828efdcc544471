"""Brute-force references, deliberately independent of the library code paths."""
import itertools
import math
from collections import Counter


def all_sequences(levels, N):
    return itertools.product(levels, repeat=N)


def ball(levels, N, e_max):
    """Lexicographically sorted list of sequences with energy <= e_max."""
    return sorted(s for s in all_sequences(levels, N) if sum(a * a for a in s) <= e_max)


def multiset_permutations(counts, levels):
    """Sorted distinct permutations of a composition, by enumeration."""
    base = [a for c, a in zip(counts, levels) for _ in range(c)]
    return sorted(set(itertools.permutations(base)))


def compositions(N, parts):
    if parts == 1:
        yield (N,)
        return
    for first in range(N, -1, -1):
        for rest in compositions(N - first, parts - 1):
            yield (first,) + rest


def min_energy_composition(levels, N, k):
    """(energy, counts) of the cheapest composition carrying >= k bits, or None."""
    best = None
    for counts in compositions(N, len(levels)):
        mult = math.factorial(N)
        for c in counts:
            mult //= math.factorial(c)
        if mult < 2**k:
            continue
        energy = sum(c * a * a for c, a in zip(counts, levels))
        if best is None or energy < best[0]:
            best = (energy, counts)
    return best


def histogram(sequences, levels):
    cnt = Counter(a for s in sequences for a in s)
    total = sum(cnt.values())
    return [cnt[a] / total for a in levels]


def binary_entropy(p):
    if p in (0, 1):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)

"""Regenerate the LDPC fixture codes in src/esspas/data (seeded, deterministic).

Usage: python tools/make_codes.py
"""
import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))
from esspas.pas.ldpc import DATA_DIR, write_alist  # noqa: E402


def regular_part(rows, cols, col_weight, rng):
    """Column-weight-regular sparse block with near-uniform row weights and no repeated columns."""
    while True:
        H = np.zeros((rows, cols), dtype=np.uint8)
        load = np.zeros(rows)
        for c in rng.permutation(cols):
            # least-loaded rows first, random tie break
            order = np.lexsort((rng.random(rows), load))
            picks = order[:col_weight]
            H[picks, c] = 1
            load[picks] += 1
        if len({H[:, c].tobytes() for c in range(cols)}) == cols:
            return H


def dual_diagonal(size):
    P = np.eye(size, dtype=np.uint8)
    P[np.arange(1, size), np.arange(size - 1)] = 1
    return P


def main():
    rng = np.random.default_rng(20190901)
    small = regular_part(12, 24, 3, rng)
    write_alist(small, os.path.join(DATA_DIR, "ldpc_24_12.alist"))

    info = regular_part(400, 2000, 3, rng)
    H = np.concatenate([info, dual_diagonal(400)], axis=1)
    write_alist(H, os.path.join(DATA_DIR, "ldpc_2400_r56.alist"))


if __name__ == "__main__":
    main()

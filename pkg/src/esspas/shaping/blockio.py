"""Text format for shaped blocks: one block per line, whitespace-separated amplitudes."""
from __future__ import annotations

from typing import Iterable, List, Tuple

import numpy as np


def write_amplitude_blocks(path: str, blocks: Iterable) -> None:
    with open(path, "w") as fh:
        for block in blocks:
            fh.write(" ".join(str(int(a)) for a in block) + "\n")


def read_amplitude_blocks(path: str) -> Tuple[List[np.ndarray], List[Tuple[int, str]]]:
    """Parse blocks; unparsable lines are reported as ``(block, message)`` and skipped."""
    blocks, errors = [], []
    with open(path) as fh:
        for b, line in enumerate(l for l in fh if l.strip()):
            try:
                blocks.append(np.array([int(t) for t in line.split()], dtype=np.int64))
            except ValueError as exc:
                errors.append((b, f"unparsable line: {exc}"))
                blocks.append(None)
    return blocks, errors

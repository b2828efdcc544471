"""Batch shaping of bit files into amplitude-block files and back."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from ..pas.bitio import read_bits, write_bits
from ..shaping import ShapingError, make_shaper, plan_rate
from ..shaping.blockio import read_amplitude_blocks, write_amplitude_blocks
from .config import ExperimentConfig


class DeshapeError(ValueError):
    def __init__(self, report: "DeshapeReport"):
        self.report = report
        lines = [f"{len(report.errors)} of {report.blocks} blocks failed:"]
        lines += [f"  block {b}: {msg}" for b, msg in report.errors]
        super().__init__("\n".join(lines))


@dataclass
class DeshapeReport:
    blocks: int
    bits: int
    errors: List[Tuple[int, str]] = field(default_factory=list)


def file_shaper(cfg: ExperimentConfig):
    if cfg.scheme == "uniform":
        raise ShapingError("uniform scheme has no shaper")
    return make_shaper(plan_rate(cfg.target_rate, cfg.m, cfg.fec_rate, cfg.N, shaper=cfg.scheme))


def shape_file(input_path: str, cfg: ExperimentConfig, output_path: str) -> int:
    """Shape a packed bit file; returns the number of blocks written.

    The payload length must be a whole number of ``k``-bit blocks.
    """
    shaper = file_shaper(cfg)
    bits = read_bits(input_path)
    if bits.size % shaper.k:
        raise ShapingError(
            f"{input_path}: {bits.size} bits is not a multiple of k={shaper.k} "
            f"({bits.size % shaper.k} bits left over)"
        )
    blocks = shaper.encode_blocks(bits.reshape(-1, shaper.k))
    write_amplitude_blocks(output_path, blocks)
    return len(blocks)


def deshape_file(input_path: str, cfg: ExperimentConfig, output_path: str) -> DeshapeReport:
    """Invert :func:`shape_file`; any bad block raises :class:`DeshapeError` listing all of them."""
    shaper = file_shaper(cfg)
    blocks, errors = read_amplitude_blocks(input_path)
    errors = list(errors)
    out = np.zeros((len(blocks), shaper.k), dtype=np.uint8)
    for b, block in enumerate(blocks):
        if block is None:
            continue
        if block.size != shaper.N:
            errors.append((b, f"length {block.size}, expected N={shaper.N}"))
            continue
        try:
            out[b] = shaper.decode(block)
        except ShapingError as exc:
            errors.append((b, str(exc)))
    report = DeshapeReport(blocks=len(blocks), bits=out.size, errors=sorted(errors))
    if errors:
        raise DeshapeError(report)
    write_bits(output_path, out.ravel())
    return report

"""Packed bit files (MSB first) with a JSON sidecar manifest carrying the length."""
from __future__ import annotations

import json

import numpy as np


class BitFileError(ValueError):
    pass


def manifest_path(path: str) -> str:
    return path + ".json"


def write_bits(path: str, bits) -> None:
    bits = np.asarray(bits, dtype=np.uint8).ravel()
    with open(path, "wb") as fh:
        fh.write(np.packbits(bits, bitorder="big").tobytes())
    with open(manifest_path(path), "w") as fh:
        json.dump({"length": int(bits.size), "bitorder": "msb-first"}, fh)
        fh.write("\n")


def read_bits(path: str) -> np.ndarray:
    try:
        with open(manifest_path(path)) as fh:
            length = int(json.load(fh)["length"])
    except (OSError, KeyError, ValueError) as exc:
        raise BitFileError(f"{path}: unreadable manifest {manifest_path(path)}: {exc}") from exc
    with open(path, "rb") as fh:
        raw = fh.read()
    need = -(-length // 8)
    if len(raw) < need:
        raise BitFileError(
            f"{path}: truncated at byte offset {len(raw)}, manifest needs {need} bytes"
        )
    bits = np.unpackbits(np.frombuffer(raw[:need], dtype=np.uint8), bitorder="big")
    return bits[:length]

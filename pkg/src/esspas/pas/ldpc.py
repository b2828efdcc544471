"""Binary LDPC codes: alist I/O, systematic encoding and normalised min-sum decoding."""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

DATA_DIR = os.path.join(os.path.dirname(os.path.dirname(__file__)), "data")

LLR_CLIP = 40.0
MIN_SUM_SCALE = 0.75
MAX_ITERATIONS = 50


def read_alist(path: str) -> np.ndarray:
    """Parse an alist file into a dense ``(rows, cols)`` uint8 parity-check matrix.

    Layout: ``n m`` / max degrees / column degrees / row degrees / one line
    of 1-based row indices per column (zero padding allowed) / one line of
    column indices per row.
    """
    with open(path) as fh:
        tokens = [line.split() for line in fh if line.strip()]
    try:
        n, m = int(tokens[0][0]), int(tokens[0][1])
        col_deg = [int(t) for t in tokens[2]]
        row_deg = [int(t) for t in tokens[3]]
        if len(col_deg) != n or len(row_deg) != m:
            raise ValueError("degree list lengths do not match the header")
        H = np.zeros((m, n), dtype=np.uint8)
        for c in range(n):
            rows = [int(t) for t in tokens[4 + c] if int(t) > 0]
            if len(rows) != col_deg[c]:
                raise ValueError(f"column {c + 1}: degree {col_deg[c]} but {len(rows)} entries")
            H[np.array(rows) - 1, c] = 1
        for r in range(m):
            cols = [int(t) for t in tokens[4 + n + r] if int(t) > 0]
            if len(cols) != row_deg[r]:
                raise ValueError(f"row {r + 1}: degree {row_deg[r]} but {len(cols)} entries")
            if set(np.flatnonzero(H[r]) + 1) != set(cols):
                raise ValueError(f"row {r + 1}: row and column lists disagree")
    except (IndexError, ValueError) as exc:
        raise ValueError(f"malformed alist file {path}: {exc}") from exc
    return H


def write_alist(H: np.ndarray, path: str) -> None:
    H = np.asarray(H, dtype=np.uint8)
    m, n = H.shape
    col_deg = H.sum(axis=0)
    row_deg = H.sum(axis=1)
    lines = [f"{n} {m}", f"{col_deg.max()} {row_deg.max()}",
             " ".join(map(str, col_deg)), " ".join(map(str, row_deg))]
    for c in range(n):
        idx = list(np.flatnonzero(H[:, c]) + 1) + [0] * (col_deg.max() - col_deg[c])
        lines.append(" ".join(map(str, idx)))
    for r in range(m):
        idx = list(np.flatnonzero(H[r]) + 1) + [0] * (row_deg.max() - row_deg[r])
        lines.append(" ".join(map(str, idx)))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _gf2_rref_from_right(H: np.ndarray):
    """Row-reduce H over GF(2), choosing pivots from the last column backwards.

    Returns the reduced matrix (rank rows) and the pivot column of each row.
    """
    A = H.copy().astype(np.uint8)
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols - 1, -1, -1):
        if r == rows:
            break
        hits = np.flatnonzero(A[r:, c])
        if not hits.size:
            continue
        p = r + hits[0]
        if p != r:
            A[[r, p]] = A[[p, r]]
        others = np.flatnonzero(A[:, c])
        others = others[others != r]
        A[others] ^= A[r]
        pivots.append(c)
        r += 1
    return A[:r], np.array(pivots, dtype=np.int64)


@dataclass
class DecodeResult:
    bits: np.ndarray        # (frames, n) hard decisions
    converged: np.ndarray   # (frames,) bool
    iterations: np.ndarray  # (frames,) iterations used


class LdpcCode:
    """Parity-check code with a dense systematic encoder and a min-sum decoder.

    Pivot columns of the reduced parity-check matrix carry parity; every
    other position carries an information bit in increasing column order.
    The preprocessing happens once in the constructor.
    """

    def __init__(self, H: np.ndarray, name: Optional[str] = None):
        self.H = np.asarray(H, dtype=np.uint8)
        self.name = name or f"ldpc_{self.H.shape[1]}"
        m, n = self.H.shape
        self.n = n
        reduced, pivots = _gf2_rref_from_right(self.H)
        self.rank = len(pivots)
        self.k = n - self.rank
        mask = np.ones(n, dtype=bool)
        mask[pivots] = False
        self.info_positions = np.flatnonzero(mask)
        self.parity_positions = pivots
        # each reduced row: parity bit = sum of its info-position entries
        self._parity_map = reduced[:, self.info_positions].T.astype(np.uint8)  # (k, rank)
        self._prepare_graph()

    @classmethod
    def from_alist(cls, path: str) -> "LdpcCode":
        return cls(read_alist(path), name=os.path.splitext(os.path.basename(path))[0])

    @classmethod
    def builtin(cls, name: str) -> "LdpcCode":
        """Load a code shipped in the package data directory."""
        return cls.from_alist(os.path.join(DATA_DIR, f"{name}.alist"))

    @property
    def rate(self):
        from fractions import Fraction

        return Fraction(self.k, self.n)

    def __repr__(self):
        return f"LdpcCode({self.name}, n={self.n}, k={self.k})"

    def _prepare_graph(self):
        checks, variables = np.nonzero(self.H)
        order = np.lexsort((variables, checks))
        self.edge_check = checks[order]
        self.edge_var = variables[order]
        edges = len(self.edge_check)
        self._check_view = _padded_view(self.edge_check, self.H.shape[0], edges)
        self._var_view = _padded_view(self.edge_var, self.n, edges)

    def encode(self, info) -> np.ndarray:
        """Systematic encoding of ``(frames, k)`` info bits to ``(frames, n)`` codewords."""
        info = np.atleast_2d(np.asarray(info, dtype=np.uint8))
        if info.shape[1] != self.k:
            raise ValueError(f"expected {self.k} info bits per frame, got {info.shape[1]}")
        cw = np.zeros((info.shape[0], self.n), dtype=np.uint8)
        cw[:, self.info_positions] = info
        parity = (info.astype(np.int64) @ self._parity_map) & 1
        cw[:, self.parity_positions] = parity
        return cw

    def extract_info(self, codewords) -> np.ndarray:
        return np.atleast_2d(codewords)[:, self.info_positions]

    def syndrome(self, bits) -> np.ndarray:
        return (np.atleast_2d(bits).astype(np.int64) @ self.H.T.astype(np.int64)) & 1

    def is_codeword(self, bits) -> np.ndarray:
        return ~self.syndrome(bits).any(axis=1)

    def decode(self, llrs, max_iterations: int = MAX_ITERATIONS,
               scale: float = MIN_SUM_SCALE, clip: float = LLR_CLIP) -> DecodeResult:
        """Flooding normalised min-sum. LLR sign convention: positive means bit 0.

        A frame counts as converged once its hard decision satisfies every
        check and no posterior LLR is exactly zero (an undecided bit).
        """
        L = np.clip(np.atleast_2d(np.asarray(llrs, dtype=float)), -clip, clip)
        if L.shape[1] != self.n:
            raise ValueError(f"expected {self.n} LLRs per frame, got {L.shape[1]}")
        frames = L.shape[0]
        edges = len(self.edge_var)
        cview, cmask = self._check_view
        vview, vmask = self._var_view

        out = (L < 0).astype(np.uint8)
        converged = np.zeros(frames, dtype=bool)
        iterations = np.full(frames, max_iterations, dtype=np.int64)
        active = np.arange(frames)
        v2c = L[:, self.edge_var]
        for it in range(1, max_iterations + 1):
            # check-node update on the padded (checks, degree) view
            msg = np.where(cmask, v2c[:, cview], np.inf)
            sgn = np.where(msg < 0, -1.0, 1.0)
            mag = np.abs(msg)
            total_sign = np.prod(sgn, axis=2, keepdims=True)
            first = np.argmin(mag, axis=2)[..., None]
            min1 = np.take_along_axis(mag, first, axis=2)
            masked = mag.copy()
            np.put_along_axis(masked, first, np.inf, axis=2)
            min2 = masked.min(axis=2, keepdims=True)
            slot = np.arange(mag.shape[2])[None, None, :]
            out_mag = np.where(slot == first, min2, min1)
            c2v_view = scale * total_sign * sgn * np.where(np.isfinite(out_mag), out_mag, 0.0)
            c2v = np.empty((len(active), edges))
            c2v[:, cview[cmask]] = c2v_view[:, cmask]

            # variable-node update
            incoming = np.where(vmask, c2v[:, vview], 0.0)
            posterior = L[active] + incoming.sum(axis=2)
            hard = (posterior < 0).astype(np.uint8)
            ok = self.is_codeword(hard) & ~(posterior == 0).any(axis=1)
            if ok.any():
                done = active[ok]
                out[done] = hard[ok]
                converged[done] = True
                iterations[done] = it
            keep = ~ok
            if not keep.any():
                break
            out[active[keep]] = hard[keep]
            active = active[keep]
            v2c = posterior[keep][:, self.edge_var] - c2v[keep]
        return DecodeResult(bits=out, converged=converged, iterations=iterations)


def _padded_view(node_of_edge: np.ndarray, nodes: int, edges: int):
    """(nodes, max_degree) matrix of edge ids, plus a validity mask."""
    degree = np.bincount(node_of_edge, minlength=nodes)
    width = max(int(degree.max()), 1)
    view = np.zeros((nodes, width), dtype=np.int64)
    mask = np.zeros((nodes, width), dtype=bool)
    order = np.argsort(node_of_edge, kind="stable")
    starts = np.concatenate([[0], np.cumsum(degree)[:-1]])
    for node in range(nodes):
        ids = order[starts[node]:starts[node] + degree[node]]
        view[node, :len(ids)] = ids
        mask[node, :len(ids)] = True
    return view, mask

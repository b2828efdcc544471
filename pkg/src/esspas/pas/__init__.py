"""PAS transmit/receive chain: labelling, FEC, LLRs and QAM assembly."""
from .bitio import read_bits, write_bits
from .chain import (
    FrameError,
    PasChain,
    PasFrame,
    ReceiveResult,
    UniformChain,
    pas_receive,
    pas_transmit,
    uniform_transmit,
)
from .labeling import LabelingMap
from .ldpc import DecodeResult, LdpcCode, read_alist, write_alist
from .llr import compute_llrs, pam_priors
from .qam import QamBlock, design_energy, qam_assemble

__all__ = [
    "DecodeResult",
    "FrameError",
    "LabelingMap",
    "LdpcCode",
    "PasChain",
    "PasFrame",
    "QamBlock",
    "ReceiveResult",
    "UniformChain",
    "compute_llrs",
    "design_energy",
    "pam_priors",
    "pas_receive",
    "pas_transmit",
    "qam_assemble",
    "read_alist",
    "read_bits",
    "uniform_transmit",
    "write_alist",
    "write_bits",
]

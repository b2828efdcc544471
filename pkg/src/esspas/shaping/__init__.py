"""Exact enumerative distribution matchers (ESS and CCDM) and rate planning."""
from .ccdm import (
    Composition,
    ccdm_composition_for_bits,
    ccdm_count,
    ccdm_decode,
    ccdm_decode_index,
    ccdm_encode,
    ccdm_encode_index,
    ccdm_num_bits,
)
from .entropy import entropy_bits, rate_loss
from .ess import (
    EnergyTrellis,
    build_trellis,
    ess_amplitude_distribution,
    ess_average_energy,
    ess_decode,
    ess_decode_index,
    ess_encode,
    ess_encode_blocks,
    ess_encode_index,
    ess_num_bits,
    min_emax_for_bits,
    sequence_count,
)
from .rates import (
    AmplitudeAlphabet,
    ShapingConfig,
    ShapingError,
    as_fraction,
    gamma,
    plan_rate,
    sign_bit_budget,
    uniform_info_rate,
)
from .shaper import Shaper, make_shaper

__all__ = [
    "AmplitudeAlphabet",
    "Composition",
    "EnergyTrellis",
    "Shaper",
    "ShapingConfig",
    "ShapingError",
    "as_fraction",
    "build_trellis",
    "ccdm_composition_for_bits",
    "ccdm_count",
    "ccdm_decode",
    "ccdm_decode_index",
    "ccdm_encode",
    "ccdm_encode_index",
    "ccdm_num_bits",
    "entropy_bits",
    "ess_amplitude_distribution",
    "ess_average_energy",
    "ess_decode",
    "ess_decode_index",
    "ess_encode",
    "ess_encode_blocks",
    "ess_encode_index",
    "ess_num_bits",
    "gamma",
    "make_shaper",
    "min_emax_for_bits",
    "plan_rate",
    "rate_loss",
    "sequence_count",
    "sign_bit_budget",
    "uniform_info_rate",
]

"""Genetic-algorithm polar code construction for the AWGN channel."""
from gapolar.core import PolarCode, bit_reverse, dmin_bruteforce, dmin_upper, encode, row_weight
from gapolar.constructions import (ReliabilityProfile, bhattacharyya_bec, info_set_from_profile,
                                   rm_info_set, rm_polar_hybrid)
from gapolar.decoders import BpConfig, DecoderSpec, SclConfig, bp_decode, sc_decode, scl_decode

__all__ = [
    "PolarCode", "bit_reverse", "dmin_bruteforce", "dmin_upper", "encode", "row_weight",
    "ReliabilityProfile", "bhattacharyya_bec", "info_set_from_profile", "rm_info_set",
    "rm_polar_hybrid", "BpConfig", "DecoderSpec", "SclConfig", "bp_decode", "sc_decode", "scl_decode",
]

"""Reed-Muller decoding workbench."""

from .rm_core import CodeSpec, NodeSpan, build_code, encode, is_codeword
from .channel_model import ChannelConfig, frame_rng, llr, transmit
from .top_decoders import (DecoderConfig, DecodeResult, aut_ssc, decode,
                           ensemble_decode, fht_fsc_decode, fht_fscl_decode,
                           fscl_decode, p_fht_fscl, sc_decode, scl_decode,
                           ssc_decode)
from .harness import FerRecord, SimJob, emit, ml_lower_bound, run_job

__all__ = [
    "CodeSpec", "NodeSpan", "build_code", "encode", "is_codeword",
    "ChannelConfig", "frame_rng", "llr", "transmit",
    "DecoderConfig", "DecodeResult", "decode", "sc_decode", "scl_decode",
    "fscl_decode", "fht_fsc_decode", "fht_fscl_decode", "p_fht_fscl",
    "ensemble_decode", "ssc_decode", "aut_ssc",
    "SimJob", "FerRecord", "run_job", "emit", "ml_lower_bound",
]

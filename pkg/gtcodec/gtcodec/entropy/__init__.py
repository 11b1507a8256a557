"""
Entropy module: quantization, range coding and coefficient payloads.

file: gtcodec/gtcodec/entropy/__init__.py
"""

from gtcodec.entropy.quantizer import (
    QuantizedCoeffs,
    dequantize,
    quantize,
)
from gtcodec.entropy.range_coder import (
    BitCounter,
    CodingContexts,
    ContextModel,
    RangeDecoder,
    RangeEncoder,
)
from gtcodec.entropy.payload import (
    decode_lastpos_bitplane,
    decode_sigmap,
    encode_lastpos_bitplane,
    encode_sigmap,
    position_bits,
)

__all__ = [
    "QuantizedCoeffs",
    "dequantize",
    "quantize",
    "BitCounter",
    "CodingContexts",
    "ContextModel",
    "RangeDecoder",
    "RangeEncoder",
    "decode_lastpos_bitplane",
    "decode_sigmap",
    "encode_lastpos_bitplane",
    "encode_sigmap",
    "position_bits",
]

"""
Codec module: block and image encoder/decoder.

file: gtcodec/gtcodec/codec/__init__.py
"""

from gtcodec.codec.models import (
    BitstreamHeader,
    BlockReport,
    CodedBlock,
    EncodedBlock,
    EncodeResult,
)
from gtcodec.codec.transforms import (
    dct2_forward,
    dct2_inverse,
    dct_basis,
    dct_eigenvalues,
    rd_cost,
    theoretical_rate_rc,
    theoretical_rate_rg,
    zigzag_order,
)
from gtcodec.codec.geometry import (
    BlockGeometry,
    get_geometry,
)
from gtcodec.codec.block import (
    analyze_block,
    decode_block,
    encode_block,
    read_block,
    reconstruct_block,
    reconstruct_weights,
    write_block,
)
from gtcodec.codec.image import (
    HEADER,
    MAGIC,
    decode_image,
    encode_image,
    parse_header,
    read_bitstream,
)
from gtcodec.codec.pgm import (
    read_image,
    write_pgm,
)

__all__ = [
    "BitstreamHeader",
    "BlockReport",
    "CodedBlock",
    "EncodedBlock",
    "EncodeResult",
    "dct2_forward",
    "dct2_inverse",
    "dct_basis",
    "dct_eigenvalues",
    "rd_cost",
    "theoretical_rate_rc",
    "theoretical_rate_rg",
    "zigzag_order",
    "BlockGeometry",
    "get_geometry",
    "analyze_block",
    "decode_block",
    "encode_block",
    "read_block",
    "reconstruct_block",
    "reconstruct_weights",
    "write_block",
    "HEADER",
    "MAGIC",
    "decode_image",
    "encode_image",
    "parse_header",
    "read_bitstream",
    "read_image",
    "write_pgm",
]

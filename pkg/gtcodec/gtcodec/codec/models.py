"""
This file contains the records produced and consumed by the codec.


file: gtcodec/gtcodec/codec/models.py
"""

import numpy as np

from typing import Optional
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
)

# Models
from gtcodec.learn.models import (
    ClassLabel,
    CodingMode,
)


class CodedBlock(BaseModel):
    """Syntax elements of one block, in bitstream order."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    use_gft: bool
    delta_index: Optional[int] = None
    graph_indices: Optional[np.ndarray] = None
    coeff_indices: np.ndarray


class BlockReport(BaseModel):
    """What the encoder decided for a block and what it cost."""

    model_config = ConfigDict(frozen=True)

    row: int
    col: int
    label: ClassLabel
    mu1: float
    mu2: float
    converged: bool = True
    iterations: int = 0
    residual: float = 0.0
    use_gft: bool = False
    delta_index: Optional[int] = None
    rd_cost_gft: Optional[float] = None
    rd_cost_dct: float
    distortion: float
    rate_rc: float = 0.0
    rate_rg: float = 0.0
    trial_bits: float
    bits: dict[str, float] = Field(default_factory=dict)
    pixel_sse: float = 0.0

    @property
    def total_bits(self) -> float:
        return float(sum(self.bits.values()))


class EncodedBlock(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    coded: CodedBlock
    reconstruction: np.ndarray
    report: BlockReport


class BitstreamHeader(BaseModel):
    model_config = ConfigDict(frozen=True)

    width: int = Field(ge=1, le=0xFFFF)
    height: int = Field(ge=1, le=0xFFFF)
    block_side: int = Field(ge=2, le=255)
    mode: CodingMode
    q: float = Field(gt=0.0)

    @property
    def block_rows(self) -> int:
        return -(-self.height // self.block_side)

    @property
    def block_cols(self) -> int:
        return -(-self.width // self.block_side)

    @property
    def block_count(self) -> int:
        return self.block_rows * self.block_cols


class EncodeResult(BaseModel):
    """Bitstream, encoder-side reconstruction and per-block reports of one image."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    header: BitstreamHeader
    bitstream: bytes
    reconstruction: np.ndarray
    reports: list[BlockReport]
    ledger: dict[str, float]

    @property
    def total_bits(self) -> int:
        return 8 * len(self.bitstream)

    @property
    def bpp(self) -> float:
        return self.total_bits / (self.header.width * self.header.height)

    @property
    def gft_share(self) -> float:
        if not self.reports:
            return 0.0
        return sum(report.use_gft for report in self.reports) / len(self.reports)

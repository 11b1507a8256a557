"""
Uniform scalar quantizer with round-half-away-from-zero.


file: gtcodec/gtcodec/entropy/quantizer.py
"""

import numpy as np

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    field_validator,
)

# Errors
from gtcodec.errors import InvalidParameterError


class QuantizedCoeffs(BaseModel):
    """Integer indices k with their step; the reconstruction is k * step."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    indices: np.ndarray
    step: float = Field(gt=0.0)

    @field_validator("indices", mode="before")
    @classmethod
    def _as_int(cls, value: np.ndarray) -> np.ndarray:
        array = np.array(value, dtype=np.int64, copy=True).ravel()
        array.setflags(write=False)
        return array

    def __len__(self) -> int:
        return int(self.indices.shape[0])


def quantize(v: np.ndarray, step: float) -> QuantizedCoeffs:
    """
    Quantize a real vector.

    Args:
        `v` (np.ndarray): Values.
        `step` (float): Positive step size.

    Returns:
        QuantizedCoeffs: k = sign(v) * floor(|v| / step + 1/2).
    """
    if not step > 0:
        raise InvalidParameterError(f"quantizer step must be positive, got {step}")

    values = np.asarray(v, dtype=np.float64).ravel()
    indices = np.sign(values) * np.floor(np.abs(values) / step + 0.5)
    return QuantizedCoeffs(indices=indices, step=step)


def dequantize(q: QuantizedCoeffs) -> np.ndarray:
    return q.indices.astype(np.float64) * q.step

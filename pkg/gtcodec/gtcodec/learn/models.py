"""
This file contains the records of the graph-learning stage.


file: gtcodec/gtcodec/learn/models.py
"""

import numpy as np

from gtcodec._compat import StrEnum
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    model_validator,
)


class CodingMode(StrEnum):
    NATURAL = "natural"
    DEPTH = "depth"


class ClassLabel(StrEnum):
    # natural images
    SMOOTH = "smooth"
    DOMINANT_GRADIENT = "dominant_gradient"
    COMPLEX = "complex"
    # depth maps
    SMOOTH_OR_WEAK = "smooth_or_weak"
    SHARP_EDGE = "sharp_edge"


NATURAL_LABELS = (ClassLabel.SMOOTH, ClassLabel.DOMINANT_GRADIENT, ClassLabel.COMPLEX)
DEPTH_LABELS = (ClassLabel.SMOOTH_OR_WEAK, ClassLabel.SHARP_EDGE)


def labels_for(mode: CodingMode) -> tuple[ClassLabel, ...]:
    return NATURAL_LABELS if mode == CodingMode.NATURAL else DEPTH_LABELS


class BlockClass(BaseModel):
    """Structure-tensor class of a block with its eigenvalues mu1 >= mu2 >= 0."""

    model_config = ConfigDict(frozen=True)

    label: ClassLabel
    mu1: float = Field(ge=0.0)
    mu2: float = Field(ge=0.0)

    @model_validator(mode="after")
    def _ordered(self) -> "BlockClass":
        if self.mu2 > self.mu1:
            raise ValueError("mu1 must not be smaller than mu2")
        return self

    @property
    def index(self) -> int:
        """Position of the label inside its mode, 0-based."""
        for labels in (NATURAL_LABELS, DEPTH_LABELS):
            if self.label in labels:
                return labels.index(self.label)
        raise AssertionError(self.label)


class LearnParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    alpha: float = Field(ge=0.0)
    beta: float = Field(gt=0.0)
    max_iter: int = Field(default=3000, ge=1)
    # relative predicted objective decrease (half the squared Newton decrement) that ends a centering
    tol: float = Field(default=1e-10, gt=0.0)
    stationarity_tol: float = Field(default=1e-4, gt=0.0)


class LearnResult(BaseModel):
    """Outcome of one weight-learning solve."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    weights: np.ndarray
    objective: float
    residual: float
    iterations: int
    converged: bool
    history: list[float] = Field(default_factory=list)

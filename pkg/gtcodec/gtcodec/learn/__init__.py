"""
Learn module: block classification, convex weight learning and baselines.

file: gtcodec/gtcodec/learn/__init__.py
"""

from gtcodec.learn.models import (
    BlockClass,
    ClassLabel,
    CodingMode,
    LearnParams,
    LearnResult,
    labels_for,
)
from gtcodec.learn.classify import (
    classify_block,
    default_params,
    structure_tensor,
)
from gtcodec.learn.solver import (
    learn_weights,
    objective,
    oracle_grid_search,
    stationarity_residual,
)
from gtcodec.learn.gaussian import gaussian_weights

__all__ = [
    "BlockClass",
    "ClassLabel",
    "CodingMode",
    "LearnParams",
    "LearnResult",
    "labels_for",
    "classify_block",
    "default_params",
    "structure_tensor",
    "learn_weights",
    "objective",
    "oracle_grid_search",
    "stationarity_residual",
    "gaussian_weights",
]

"""
Quality metrics, rate-distortion curves and the Bjontegaard delta PSNR.


file: gtcodec/gtcodec/evaluation/metrics.py
"""

import math

import numpy as np

from typing import Optional
from pydantic import (
    BaseModel,
    ConfigDict,
    field_validator,
)
from scipy.stats import (
    pearsonr,
    spearmanr,
)

# Errors
from gtcodec.errors import (
    DimensionError,
    EvaluationError,
)

PEAK = 255.0
BD_MIN_POINTS = 4


def psnr(a: np.ndarray, b: np.ndarray) -> float:
    """
    Peak signal-to-noise ratio of two 8-bit images in dB.

    Returns `math.inf` when the images are identical.
    """
    first = np.asarray(a, dtype=np.float64)
    second = np.asarray(b, dtype=np.float64)
    if first.shape != second.shape:
        raise DimensionError(f"image shapes differ: {first.shape} vs {second.shape}")

    mse = float(np.mean((first - second) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(PEAK * PEAK / mse)


class RDPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    rate: float
    psnr: float
    q: Optional[float] = None
    graph_fraction: float = 0.0

    @property
    def lossless(self) -> bool:
        return math.isinf(self.psnr)


class RDCurve(BaseModel):
    """Rate-distortion points sorted by rate."""

    model_config = ConfigDict(frozen=True)

    points: list[RDPoint]

    @field_validator("points")
    @classmethod
    def _sorted(cls, value: list[RDPoint]) -> list[RDPoint]:
        return sorted(value, key=lambda point: (point.rate, point.psnr))

    @property
    def rates(self) -> np.ndarray:
        return np.array([point.rate for point in self.points])

    @property
    def psnrs(self) -> np.ndarray:
        return np.array([point.psnr for point in self.points])

    def __len__(self) -> int:
        return len(self.points)


def _check_curve(curve: RDCurve, name: str) -> tuple[np.ndarray, np.ndarray]:
    if len(curve) < BD_MIN_POINTS:
        raise EvaluationError(f"{name} curve needs at least {BD_MIN_POINTS} points, got {len(curve)}")
    rates, psnrs = curve.rates, curve.psnrs
    if np.any(rates <= 0) or np.any(np.diff(rates) <= 0):
        raise EvaluationError(f"{name} curve rates must be positive and strictly increasing")
    if not np.all(np.isfinite(psnrs)):
        raise EvaluationError(f"{name} curve has a lossless point")
    return np.log(rates), psnrs


def bd_psnr(reference: RDCurve, test: RDCurve) -> float:
    """
    Bjontegaard delta PSNR of `test` against `reference`.

    Each curve is fitted with a cubic in log-rate; the result is the mean gap
    between the fits over the common log-rate interval.

    Args:
        `reference` (RDCurve): Anchor curve.
        `test` (RDCurve): Curve under test.

    Returns:
        float: Average PSNR gain of `test` in dB.
    """
    log_ref, psnr_ref = _check_curve(reference, "reference")
    log_test, psnr_test = _check_curve(test, "test")

    low = max(log_ref.min(), log_test.min())
    high = min(log_ref.max(), log_test.max())
    if high <= low:
        raise EvaluationError("rate ranges of the two curves do not overlap")

    def mean_value(log_rates: np.ndarray, psnrs: np.ndarray) -> float:
        integral = np.polyint(np.polyfit(log_rates, psnrs, 3))
        return float((np.polyval(integral, high) - np.polyval(integral, low)) / (high - low))

    return mean_value(log_test, psnr_test) - mean_value(log_ref, psnr_ref)


def _check_pair(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    first = np.asarray(x, dtype=np.float64)
    second = np.asarray(y, dtype=np.float64)
    if first.shape != second.shape or first.ndim != 1:
        raise DimensionError("correlation needs two vectors of equal length")
    if first.shape[0] < 2:
        raise EvaluationError("correlation needs at least two samples")
    if np.ptp(first) == 0 or np.ptp(second) == 0:
        raise EvaluationError("correlation is undefined for a constant series")
    return first, second


def pearson(x: np.ndarray, y: np.ndarray) -> float:
    first, second = _check_pair(x, y)
    return float(pearsonr(first, second).statistic)


def spearman(x: np.ndarray, y: np.ndarray) -> float:
    first, second = _check_pair(x, y)
    return float(spearmanr(first, second).statistic)

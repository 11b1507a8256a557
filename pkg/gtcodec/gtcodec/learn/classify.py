"""
Structure-tensor block classification and the per-class solver parameters.

The class only tunes the encoder; the decoder never needs it.


file: gtcodec/gtcodec/learn/classify.py
"""

import numpy as np

from scipy.ndimage import correlate1d

# Models
from gtcodec.learn.models import (
    BlockClass,
    ClassLabel,
    CodingMode,
    LearnParams,
    labels_for,
)

# Errors
from gtcodec.errors import (
    DimensionError,
    InvalidParameterError,
)

CENTRAL_DIFFERENCE = np.array([-0.5, 0.0, 0.5])

DEFAULT_PARAMS: dict[ClassLabel, tuple[float, float]] = {
    ClassLabel.SMOOTH: (100.0, 1.0),
    ClassLabel.DOMINANT_GRADIENT: (500.0, 1.0),
    ClassLabel.COMPLEX: (800.0, 1.0),
    ClassLabel.SMOOTH_OR_WEAK: (40.0, 0.02),
    ClassLabel.SHARP_EDGE: (400.0, 1.0),
}


def structure_tensor(block: np.ndarray) -> np.ndarray:
    """
    Mean gradient outer product over a square block.

    Gradients are central differences with replicated borders.

    Args:
        `block` (np.ndarray): side x side intensities.

    Returns:
        np.ndarray: The 2x2 tensor.
    """
    u = np.asarray(block, dtype=np.float64)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise DimensionError(f"expected a square block, got shape {u.shape}")

    gx = correlate1d(u, CENTRAL_DIFFERENCE, axis=1, mode="nearest")
    gy = correlate1d(u, CENTRAL_DIFFERENCE, axis=0, mode="nearest")

    gxy = float(np.mean(gx * gy))
    return np.array([
        [float(np.mean(gx * gx)), gxy],
        [gxy, float(np.mean(gy * gy))],
    ])


def classify_block(
    block: np.ndarray,
    mode: CodingMode,
    thresholds: tuple[float, float] = (25.0, 400.0),
) -> BlockClass:
    """
    Classify a block from the eigenvalues of its structure tensor.

    Args:
        `block` (np.ndarray): side x side intensities.
        `mode` (CodingMode): natural images use three classes, depth maps two.
        `thresholds` (tuple[float, float]): (t_low, t_high).

    Returns:
        BlockClass: Label with mu1 >= mu2 >= 0.
    """
    t_low, t_high = thresholds
    low, high = np.linalg.eigvalsh(structure_tensor(block))
    mu1 = max(float(high), 0.0)
    mu2 = min(max(float(low), 0.0), mu1)

    if mode == CodingMode.NATURAL:
        if mu1 < t_low:
            label = ClassLabel.SMOOTH
        elif mu2 < t_low:
            label = ClassLabel.DOMINANT_GRADIENT
        else:
            label = ClassLabel.COMPLEX
    else:
        label = ClassLabel.SMOOTH_OR_WEAK if mu1 < t_high else ClassLabel.SHARP_EDGE

    return BlockClass(label=label, mu1=mu1, mu2=mu2)


def default_params(c: BlockClass, mode: CodingMode) -> LearnParams:
    """(alpha, beta) of a block class."""
    if c.label not in labels_for(mode):
        raise InvalidParameterError(f"class {c.label} does not belong to {mode} mode")

    alpha, beta = DEFAULT_PARAMS[c.label]
    return LearnParams(alpha=alpha, beta=beta)

"""
Gaussian-kernel edge weights, the fixed-graph baseline.


file: gtcodec/gtcodec/learn/gaussian.py
"""

import numpy as np

# Models
from gtcodec.graph.models import GridGraph
from gtcodec.graph.core import edge_differences

SIGMA_FACTOR = 0.15


def gaussian_weights(g: GridGraph, u: np.ndarray) -> np.ndarray:
    """
    w_e = exp(-(u_i - u_j)^2 / sigma^2) with sigma = 0.15 * max_e |u_i - u_j|.

    A block without any intensity difference across an edge gets all weights 1.

    Args:
        `g` (GridGraph): Block topology.
        `u` (np.ndarray): Block intensities.

    Returns:
        np.ndarray: Weights in (0, 1].
    """
    squared = edge_differences(g, np.asarray(u, dtype=np.float64).ravel())
    peak = float(np.max(squared)) if squared.size else 0.0
    if peak == 0.0:
        return np.ones(g.edge_count)

    sigma_squared = SIGMA_FACTOR * SIGMA_FACTOR * peak
    return np.exp(-squared / sigma_squared)

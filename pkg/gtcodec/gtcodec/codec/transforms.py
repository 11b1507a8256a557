"""
Separable DCT, coefficient scan order, rate proxies and the RD cost.


file: gtcodec/gtcodec/codec/transforms.py
"""

import numpy as np

from scipy.fft import (
    dct,
    dctn,
    idctn,
)

# Models
from gtcodec.graph.models import (
    DualGraph,
    Spectrum,
)
from gtcodec.graph.core import gft_forward

# Errors
from gtcodec.errors import DimensionError


def _square(block: np.ndarray) -> np.ndarray:
    array = np.asarray(block, dtype=np.float64)
    if array.ndim != 2 or array.shape[0] != array.shape[1]:
        raise DimensionError(f"expected a square block, got shape {array.shape}")
    return array


def dct2_forward(block: np.ndarray) -> np.ndarray:
    """Orthonormal type-II 2-D DCT."""
    return dctn(_square(block), type=2, norm="ortho")


def dct2_inverse(coefficients: np.ndarray) -> np.ndarray:
    return idctn(_square(coefficients), type=2, norm="ortho")


def zigzag_order(side: int) -> np.ndarray:
    """
    Flat (row-major) coefficient positions in JPEG zigzag order.

    Args:
        `side` (int): Block side.

    Returns:
        np.ndarray: Permutation of range(side * side).
    """
    positions = [(row, col) for row in range(side) for col in range(side)]
    positions.sort(key=lambda rc: (rc[0] + rc[1], rc[0] if (rc[0] + rc[1]) % 2 else -rc[0]))
    return np.array([row * side + col for row, col in positions], dtype=np.intp)


def dct_eigenvalues(side: int) -> np.ndarray:
    """
    Graph frequencies of the 2-D DCT basis on the unit-weight grid, row-major.

    The DCT-II basis diagonalises the uniform grid Laplacian with eigenvalues
    (2 - 2 cos(pi i / side)) + (2 - 2 cos(pi j / side)).
    """
    path = 2.0 - 2.0 * np.cos(np.pi * np.arange(side) / side)
    return (path[:, None] + path[None, :]).ravel()


def dct_basis(side: int) -> np.ndarray:
    """N x N matrix whose columns are the 2-D DCT basis vectors in zigzag order."""
    one_d = dct(np.eye(side), type=2, norm="ortho", axis=0)
    analysis = np.kron(one_d, one_d)
    return analysis.T[:, zigzag_order(side)]


def theoretical_rate_rc(s: Spectrum, u: np.ndarray) -> float:
    """Sum of eigenvalue-weighted squared GFT coefficients, equal to u^T L u."""
    coefficients = gft_forward(s, np.asarray(u, dtype=np.float64).ravel())
    return float(s.eigenvalues @ (coefficients * coefficients))


def theoretical_rate_rg(d: DualGraph, w: np.ndarray) -> float:
    """l1 norm of the dual-graph Fourier coefficients of the weights."""
    weights = np.asarray(w, dtype=np.float64)
    if weights.ndim != 1 or weights.shape[0] != d.node_count:
        raise DimensionError(f"expected {d.node_count} edge weights, got shape {weights.shape}")
    return float(np.abs(d.spectrum.eigenvectors.T @ weights).sum())


def rd_cost(distortion: float, rate_bits: float, gamma: float) -> float:
    return distortion + gamma * rate_bits

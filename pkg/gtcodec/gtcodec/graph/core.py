"""
Graph construction, Laplacians, deterministic eigendecomposition and the
graph Fourier transform.


file: gtcodec/gtcodec/graph/core.py
"""

import numpy as np

from typing import Optional

# Models
from gtcodec.graph.models import (
    DualGraph,
    GridGraph,
    Spectrum,
)

# Cache
from gtcodec.cache import get_cache_manager

# Errors
from gtcodec.errors import (
    DimensionError,
    DomainError,
    EmptyGraphError,
    InvalidParameterError,
    NumericalError,
)

# Logger
from gtcodec.logger import logger

SYMMETRY_TOLERANCE = 1e-9
SIGN_THRESHOLD = 1e-12
TIE_TOLERANCE = 1e-10


def build_grid_incidence(side: int, cols: Optional[int] = None) -> GridGraph:
    """
    Build the 4-connected grid on side x cols pixels (square when `cols` is None).

    Args:
        `side` (int): Number of pixel rows, at least 1.
        `cols` (int | None): Number of pixel columns, defaults to `side`.

    Returns:
        GridGraph: Topology with the canonical edge order.
    """
    rows = int(side)
    cols = rows if cols is None else int(cols)
    if rows < 1 or cols < 1:
        raise InvalidParameterError(f"grid dimensions must be positive, got {rows}x{cols}")

    index = np.arange(rows * cols).reshape(rows, cols)
    horizontal = np.stack([index[:, :-1].ravel(), index[:, 1:].ravel()], axis=1)
    vertical = np.stack([index[:-1, :].ravel(), index[1:, :].ravel()], axis=1)
    edges = np.concatenate([horizontal, vertical]).reshape(-1, 2)

    edge_count = edges.shape[0]
    incidence = np.zeros((rows * cols, edge_count))
    columns = np.arange(edge_count)
    incidence[edges[:, 0], columns] = 1.0
    incidence[edges[:, 1], columns] = -1.0

    return GridGraph(rows=rows, cols=cols, edges=edges, incidence=incidence)


def _check_signal(values: np.ndarray, length: int, name: str) -> np.ndarray:
    array = np.asarray(values, dtype=np.float64)
    if array.ndim != 1 or array.shape[0] != length:
        raise DimensionError(f"{name} must be a vector of length {length}, got shape {array.shape}")
    return array


def build_laplacian(g: GridGraph, w: np.ndarray) -> np.ndarray:
    """
    Assemble L = B diag(w) B^T.

    Args:
        `g` (GridGraph): Topology.
        `w` (np.ndarray): Strictly positive edge weights, one per edge.

    Returns:
        np.ndarray: The N x N Laplacian.
    """
    weights = _check_signal(w, g.edge_count, "edge weights")
    if np.any(weights <= 0):
        raise DomainError("edge weights must be strictly positive")

    return (g.incidence * weights) @ g.incidence.T


def edge_differences(g: GridGraph, x: np.ndarray) -> np.ndarray:
    """Squared differences (x_i - x_j)^2 across every edge, in edge order."""
    signal = _check_signal(x, g.node_count, "graph signal")
    diff = signal[g.edges[:, 0]] - signal[g.edges[:, 1]]
    return diff * diff


def smoothness(g: GridGraph, w: np.ndarray, x: np.ndarray) -> float:
    """Dirichlet energy x^T L x, evaluated as sum_e w_e (x_i - x_j)^2."""
    weights = _check_signal(w, g.edge_count, "edge weights")
    return float(weights @ edge_differences(g, x))


def eigendecompose(l: np.ndarray) -> Spectrum:
    """
    Symmetric eigendecomposition with a reproducible basis.

    Eigenvalues come out ascending. Each eigenvector is flipped so that its
    first entry above 1e-12 in magnitude is positive, and eigenvectors sharing
    an eigenvalue (within 1e-10 relative) are ordered by decreasing
    lexicographic value of their entries. Encoder and decoder run this on
    identical matrices and must get an identical basis.

    Args:
        `l` (np.ndarray): Symmetric n x n matrix.

    Returns:
        Spectrum: Eigenvalues and orthonormal eigenvectors.
    """
    matrix = np.asarray(l, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {matrix.shape}")

    n = matrix.shape[0]
    if n == 0:
        return Spectrum(eigenvalues=np.zeros(0), eigenvectors=np.zeros((0, 0)))

    if np.max(np.abs(matrix - matrix.T)) > SYMMETRY_TOLERANCE:
        raise DomainError("matrix is not symmetric")

    try:
        eigenvalues, eigenvectors = np.linalg.eigh(0.5 * (matrix + matrix.T))
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition did not converge: {exc}") from exc

    # sign convention
    significant = np.abs(eigenvectors) > SIGN_THRESHOLD
    first = np.argmax(significant, axis=0)
    signs = np.sign(eigenvectors[first, np.arange(n)])
    signs[signs == 0] = 1.0
    eigenvectors = eigenvectors * signs

    # order within groups of repeated eigenvalues
    scale = max(1.0, float(np.max(np.abs(eigenvalues))))
    start = 0
    for stop in range(1, n + 1):
        if stop < n and eigenvalues[stop] - eigenvalues[stop - 1] <= TIE_TOLERANCE * scale:
            continue
        if stop - start > 1:
            block = eigenvectors[:, start:stop]
            order = np.lexsort(-block[::-1])
            eigenvectors[:, start:stop] = block[:, order]
        start = stop

    return Spectrum(eigenvalues=eigenvalues, eigenvectors=eigenvectors)


def gft_forward(s: Spectrum, x: np.ndarray) -> np.ndarray:
    """Graph Fourier coefficients Psi^T x."""
    signal = _check_signal(x, s.size, "graph signal")
    return s.eigenvectors.T @ signal


def gft_inverse(s: Spectrum, xhat: np.ndarray) -> np.ndarray:
    """Graph signal Psi xhat."""
    coefficients = _check_signal(xhat, s.size, "spectral coefficients")
    return s.eigenvectors @ coefficients


def build_dual_graph(g: GridGraph) -> DualGraph:
    """
    Build the dual (line) graph of a grid and its spectrum.

    Args:
        `g` (GridGraph): Primal topology with at least one edge.

    Returns:
        DualGraph: Adjacency, Laplacian and spectrum of the dual graph.
    """
    if g.edge_count == 0:
        raise EmptyGraphError("the dual of an edgeless graph is empty")

    endpoints = np.abs(g.incidence)
    # distinct edges of a simple graph share at most one endpoint
    adjacency = endpoints.T @ endpoints
    np.fill_diagonal(adjacency, 0.0)
    laplacian = np.diag(adjacency.sum(axis=1)) - adjacency

    return DualGraph(
        adjacency=adjacency,
        laplacian=laplacian,
        spectrum=eigendecompose(laplacian),
    )


def get_dual_graph(g: GridGraph) -> DualGraph:
    """Dual graph of `g`, computed once per grid shape and process."""
    key = ("dual", g.rows, g.cols)

    def factory() -> DualGraph:
        logger.debug(f"Computing dual spectrum for a {g.rows}x{g.cols} grid ({g.edge_count} edges)")
        return build_dual_graph(g)

    return get_cache_manager().get_or_create(key, factory)


def get_grid_graph(side: int, cols: Optional[int] = None) -> GridGraph:
    """Grid topology, computed once per shape and process."""
    cols = side if cols is None else cols
    return get_cache_manager().get_or_create(
        ("grid", side, cols), lambda: build_grid_incidence(side, cols)
    )

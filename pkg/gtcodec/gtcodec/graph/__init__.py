"""
Graph module: grid and dual topologies, Laplacians, spectra and the GFT.

file: gtcodec/gtcodec/graph/__init__.py
"""

from gtcodec.graph.models import (
    DualGraph,
    GridGraph,
    Spectrum,
)
from gtcodec.graph.core import (
    build_dual_graph,
    build_grid_incidence,
    build_laplacian,
    edge_differences,
    eigendecompose,
    get_dual_graph,
    get_grid_graph,
    gft_forward,
    gft_inverse,
    smoothness,
)

__all__ = [
    "DualGraph",
    "GridGraph",
    "Spectrum",
    "build_dual_graph",
    "build_grid_incidence",
    "build_laplacian",
    "edge_differences",
    "eigendecompose",
    "get_dual_graph",
    "get_grid_graph",
    "gft_forward",
    "gft_inverse",
    "smoothness",
]

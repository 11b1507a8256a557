"""
This file contains the graph records: grid topology, dual graph and spectra.

All arrays are made read-only on construction so a record can be shared
between threads and cached for the lifetime of the process.


file: gtcodec/gtcodec/graph/models.py
"""

import numpy as np

from pydantic import (
    BaseModel,
    ConfigDict,
    field_validator,
)


def _frozen_array(value: np.ndarray, dtype=np.float64) -> np.ndarray:
    array = np.array(value, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


class Spectrum(BaseModel):
    """Eigenvalues in ascending order and the matching orthonormal eigenvectors."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @field_validator("eigenvalues", "eigenvectors", mode="before")
    @classmethod
    def _freeze(cls, value: np.ndarray) -> np.ndarray:
        return _frozen_array(value)

    @property
    def size(self) -> int:
        return int(self.eigenvalues.shape[0])


class GridGraph(BaseModel):
    """
    4-connected rows x cols pixel grid.

    Edges are listed horizontal ones first (row-major), then vertical ones
    (row-major). Column e of the incidence matrix holds +1 at the lower node
    index of edge e and -1 at the higher one.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    rows: int
    cols: int
    edges: np.ndarray
    incidence: np.ndarray

    @field_validator("edges", mode="before")
    @classmethod
    def _freeze_edges(cls, value: np.ndarray) -> np.ndarray:
        return _frozen_array(value, dtype=np.intp)

    @field_validator("incidence", mode="before")
    @classmethod
    def _freeze_incidence(cls, value: np.ndarray) -> np.ndarray:
        return _frozen_array(value)

    @property
    def node_count(self) -> int:
        return self.rows * self.cols

    @property
    def edge_count(self) -> int:
        return int(self.edges.shape[0])

    @property
    def side(self) -> int:
        return self.rows

    @property
    def edge_list(self) -> list[tuple[int, int]]:
        return [(int(i), int(j)) for i, j in self.edges]


class DualGraph(BaseModel):
    """
    Unweighted line graph of a grid: one node per primal edge, adjacent when
    the two primal edges share an endpoint. Independent of the edge weights.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    adjacency: np.ndarray
    laplacian: np.ndarray
    spectrum: Spectrum

    @field_validator("adjacency", "laplacian", mode="before")
    @classmethod
    def _freeze(cls, value: np.ndarray) -> np.ndarray:
        return _frozen_array(value)

    @property
    def node_count(self) -> int:
        return int(self.adjacency.shape[0])

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

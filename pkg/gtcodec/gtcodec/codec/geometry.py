"""
Per-block-side geometry shared by every block of an image.


file: gtcodec/gtcodec/codec/geometry.py
"""

import numpy as np

from pydantic import (
    BaseModel,
    ConfigDict,
)

# Graph
from gtcodec.graph.models import (
    DualGraph,
    GridGraph,
)
from gtcodec.graph.core import (
    get_dual_graph,
    get_grid_graph,
)
from gtcodec.codec.transforms import (
    dct_eigenvalues,
    zigzag_order,
)

# Cache
from gtcodec.cache import get_cache_manager


class BlockGeometry(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    side: int
    grid: GridGraph
    dual: DualGraph
    zigzag: np.ndarray
    # DCT graph frequencies in zigzag order
    dct_frequencies: np.ndarray

    @property
    def pixel_count(self) -> int:
        return self.side * self.side

    @property
    def edge_count(self) -> int:
        return self.grid.edge_count


def get_geometry(side: int) -> BlockGeometry:
    """Geometry of side x side blocks, built once per process."""

    def factory() -> BlockGeometry:
        grid = get_grid_graph(side)
        zigzag = zigzag_order(side)
        return BlockGeometry(
            side=side,
            grid=grid,
            dual=get_dual_graph(grid),
            zigzag=zigzag,
            dct_frequencies=dct_eigenvalues(side)[zigzag],
        )

    return get_cache_manager().get_or_create(("geometry", side), factory)

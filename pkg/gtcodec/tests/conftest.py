"""
Shared fixtures: synthetic images, small configurations and graphs.

file: gtcodec/tests/conftest.py
"""

import numpy as np
import pytest

from gtcodec.cache import close_cache_manager
from gtcodec.config import EncoderConfig
from gtcodec.graph import (
    build_dual_graph,
    build_grid_incidence,
)


def make_natural_image(height: int, width: int, seed: int = 7, noise: float = 10.0) -> np.ndarray:
    """Smooth shading, an oriented texture, one edge and sensor-like noise."""
    rng = np.random.default_rng(seed)
    rows, cols = np.mgrid[0:height, 0:width].astype(np.float64)
    image = 90.0 + 60.0 * rows / max(height - 1, 1) + 30.0 * np.sin(cols / 3.0 + rows / 7.0)
    image += np.where(cols > 0.6 * width + 0.2 * rows, 50.0, 0.0)
    image += rng.normal(0.0, noise, size=(height, width))
    return np.clip(np.rint(image), 0, 255).astype(np.uint8)


def make_piecewise_image(size: int, levels: int, seed: int = 3) -> np.ndarray:
    """Convex polygonal regions (a Voronoi partition) with `levels` gray values."""
    rng = np.random.default_rng(seed)
    sites = rng.uniform(0, size, size=(3 * levels, 2))
    grays = rng.choice(np.linspace(20, 235, levels), size=sites.shape[0])
    grays[:levels] = np.linspace(20, 235, levels)
    rows, cols = np.mgrid[0:size, 0:size]
    distance = (rows[..., None] - sites[:, 0]) ** 2 + (cols[..., None] - sites[:, 1]) ** 2
    return np.rint(grays[np.argmin(distance, axis=-1)]).astype(np.uint8)


@pytest.fixture(autouse=True)
def fresh_cache():
    yield
    close_cache_manager()


@pytest.fixture
def natural_image() -> np.ndarray:
    return make_natural_image(32, 32)


@pytest.fixture
def piecewise_image() -> np.ndarray:
    return make_piecewise_image(32, 3)


@pytest.fixture
def image_factory():
    return make_natural_image


@pytest.fixture
def piecewise_factory():
    return make_piecewise_image


@pytest.fixture
def small_config() -> EncoderConfig:
    """8x8 blocks, in-process analysis."""
    return EncoderConfig(block_side=8, threads=1)


@pytest.fixture
def path3():
    """3-node path graph and its dual."""
    g = build_grid_incidence(1, 3)
    return g, build_dual_graph(g)


@pytest.fixture
def square2():
    """2x2 grid (4 nodes, 4 edges) and its dual."""
    g = build_grid_incidence(2)
    return g, build_dual_graph(g)

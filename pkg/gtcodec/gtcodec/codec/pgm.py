"""
Grayscale image files.

Anything Pillow can open is accepted on input (binary PGM is the reference
format, PNG works as well) and converted to 8-bit luminance. Output is always
binary PGM (P5).


file: gtcodec/gtcodec/codec/pgm.py
"""

import numpy as np

from pathlib import Path
from PIL import Image

# Errors
from gtcodec.errors import DimensionError


def read_image(path: str | Path) -> np.ndarray:
    """
    Load an image as a height x width uint8 array.

    Args:
        `path` (str | Path): Image file.

    Returns:
        np.ndarray: Luminance samples.
    """
    with Image.open(path) as image:
        return np.asarray(image.convert("L"), dtype=np.uint8).copy()


def write_pgm(path: str | Path, img: np.ndarray) -> None:
    """Write a uint8 grayscale array as binary PGM."""
    array = np.asarray(img)
    if array.ndim != 2:
        raise DimensionError(f"expected a grayscale image, got shape {array.shape}")
    Image.fromarray(np.clip(array, 0, 255).astype(np.uint8)).save(path, format="PPM")

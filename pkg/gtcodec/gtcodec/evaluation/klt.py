"""
Per-class KLT baseline.

The transforms are trained on the blocks of the very image being coded and
only the class index is charged as side information, so the baseline is an
oracle bound rather than a deployable codec.


file: gtcodec/gtcodec/evaluation/klt.py
"""

import numpy as np

from typing import (
    Iterable,
    Optional,
    Sequence,
)
from pydantic import (
    BaseModel,
    ConfigDict,
)

# Models
from gtcodec.config import EncoderConfig
from gtcodec.learn.models import (
    ClassLabel,
    labels_for,
)

# Graph
from gtcodec.graph.core import eigendecompose
from gtcodec.learn.classify import classify_block

# Codec
from gtcodec.codec.image import (
    HEADER,
    pad_image,
)
from gtcodec.codec.transforms import dct_basis

# Entropy
from gtcodec.entropy.quantizer import quantize
from gtcodec.entropy.range_coder import RangeEncoder
from gtcodec.entropy.payload import encode_lastpos_bitplane

# Errors
from gtcodec.errors import DimensionError

# Logger
from gtcodec.logger import logger

CLASS_INDEX_BITS = 2


class KltTransform(BaseModel):
    """Orthonormal basis (columns) ordered by decreasing variance."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    label: ClassLabel
    basis: np.ndarray
    eigenvalues: np.ndarray
    samples: int
    fallback: bool = False


class KltResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    bits: int
    reconstruction: np.ndarray
    ledger: dict[str, float]

    @property
    def bpp(self) -> float:
        height, width = self.reconstruction.shape
        return self.bits / (width * height)


def klt_train(
    blocks: Sequence[np.ndarray],
    classes: Sequence[ClassLabel],
    labels: Optional[Iterable[ClassLabel]] = None,
    side: Optional[int] = None,
) -> dict[ClassLabel, KltTransform]:
    """
    Train one KLT per class.

    A class with fewer than two blocks gets the DCT basis in zigzag order.

    Args:
        `blocks` (Sequence[np.ndarray]): Training blocks, all side x side.
        `classes` (Sequence[ClassLabel]): Class of each block.
        `labels` (Iterable[ClassLabel] | None): Classes to produce, the ones present by default.
        `side` (int | None): Block side, needed only when `blocks` is empty.

    Returns:
        dict[ClassLabel, KltTransform]: One transform per label.
    """
    if len(blocks) != len(classes):
        raise DimensionError(f"{len(blocks)} blocks but {len(classes)} class labels")
    if side is None:
        if not blocks:
            raise DimensionError("block side is unknown without training blocks")
        side = np.asarray(blocks[0]).shape[0]

    n = side * side
    labels = list(dict.fromkeys(labels if labels is not None else classes))
    transforms = {}
    for label in labels:
        data = np.array([np.asarray(block, dtype=np.float64).ravel() for block, c in zip(blocks, classes) if c == label])
        if data.shape[0] < 2:
            transforms[label] = KltTransform(
                label=label,
                basis=dct_basis(side),
                eigenvalues=np.zeros(n),
                samples=int(data.shape[0]),
                fallback=True,
            )
            continue

        if data.shape[1] != n:
            raise DimensionError(f"expected blocks of {n} pixels, got {data.shape[1]}")

        covariance = np.cov(data, rowvar=False, bias=True)
        spectrum = eigendecompose(covariance)
        transforms[label] = KltTransform(
            label=label,
            basis=spectrum.eigenvectors[:, ::-1].copy(),
            eigenvalues=spectrum.eigenvalues[::-1].copy(),
            samples=int(data.shape[0]),
        )
    return transforms


def klt_code_image(
    img: np.ndarray,
    cfg: EncoderConfig,
    q: Optional[float] = None,
    transforms: Optional[dict[ClassLabel, KltTransform]] = None,
) -> KltResult:
    """
    Code an image with the per-class KLT baseline.

    Each block costs a 2-bit class index plus its coefficients, quantized with
    step q and coded with the last-position bitplane syntax in
    decreasing-eigenvalue order.

    Args:
        `img` (np.ndarray): 8-bit grayscale image.
        `cfg` (EncoderConfig): Block side, mode and class thresholds.
        `q` (float | None): Step, `cfg.q` by default.
        `transforms` (dict | None): Pre-trained transforms; trained on `img` when None.

    Returns:
        KltResult: Total bits (with the codec header) and the reconstruction.
    """
    q = cfg.q if q is None else q
    image = np.asarray(img, dtype=np.float64)
    height, width = image.shape
    side = cfg.block_side
    padded = pad_image(image, side)

    blocks = []
    for r in range(padded.shape[0] // side):
        for c in range(padded.shape[1] // side):
            blocks.append(((r, c), padded[r * side:(r + 1) * side, c * side:(c + 1) * side]))

    labels = labels_for(cfg.mode)
    classes = [classify_block(block, cfg.mode, (cfg.t_low, cfg.t_high)).label for _, block in blocks]
    if transforms is None:
        transforms = klt_train([block for _, block in blocks], classes, labels, side)

    coder = RangeEncoder()
    reconstruction = np.zeros_like(padded)
    for ((r, c), block), label in zip(blocks, classes):
        basis = transforms[label].basis
        with coder.section("class"):
            coder.encode_bits(labels.index(label), CLASS_INDEX_BITS)

        indices = quantize(basis.T @ block.ravel(), q).indices
        with coder.section("coeff"):
            encode_lastpos_bitplane(coder, indices, side * side, coder.contexts.coeff)

        pixels = basis @ (indices.astype(np.float64) * q)
        reconstruction[r * side:(r + 1) * side, c * side:(c + 1) * side] = np.clip(pixels, 0.0, 255.0).reshape(side, side)

    bits = 8 * (HEADER.size + len(coder.finish()))
    logger.debug(f"KLT baseline at q={q}: {bits} bits for {len(blocks)} blocks")
    return KltResult(
        bits=bits,
        reconstruction=np.rint(reconstruction[:height, :width]).astype(np.uint8),
        ledger=dict(coder.ledger),
    )


def energy_compaction(basis: np.ndarray, blocks: Sequence[np.ndarray]) -> np.ndarray:
    """Cumulative variance captured by the first k basis vectors, for every k."""
    data = np.array([np.asarray(block, dtype=np.float64).ravel() for block in blocks])
    coefficients = (data - data.mean(axis=0)) @ basis
    return np.cumsum(coefficients.var(axis=0))


"""
Block coding: graph learning, rate-distortion search, GFT/DCT selection and the
block syntax.

Encoding is split into `analyze_block`, which only depends on the block and the
configuration, and `write_block`, which must run in raster order on the shared
entropy coder. Decoding mirrors it with `read_block` and `reconstruct_block`.

Block syntax:

    flag            1 bypass bit (1 = GFT)
    delta index     delta_bits bypass bits          (GFT only)
    graph payload   m_tilde weight indices          (GFT only)
                    last-position coding in natural mode,
                    significance map in depth mode
    coefficients    N indices, last-position coding


file: gtcodec/gtcodec/codec/block.py
"""

import numpy as np

from typing import (
    Optional,
    Union,
)

# Models
from gtcodec.codec.models import (
    BlockReport,
    CodedBlock,
    EncodedBlock,
)
from gtcodec.config import (
    EncoderConfig,
    GraphSource,
)
from gtcodec.learn.models import (
    BlockClass,
    CodingMode,
)
from gtcodec.graph.models import DualGraph

# Graph
from gtcodec.graph.core import (
    build_laplacian,
    eigendecompose,
    gft_forward,
    gft_inverse,
)
from gtcodec.learn.classify import classify_block
from gtcodec.learn.solver import learn_weights
from gtcodec.learn.gaussian import gaussian_weights

# Codec
from gtcodec.codec.geometry import (
    BlockGeometry,
    get_geometry,
)
from gtcodec.codec.transforms import (
    dct2_forward,
    dct2_inverse,
    rd_cost,
)

# Entropy
from gtcodec.entropy.quantizer import quantize
from gtcodec.entropy.range_coder import (
    BitCounter,
    RangeDecoder,
    RangeEncoder,
)
from gtcodec.entropy.payload import (
    decode_lastpos_bitplane,
    decode_sigmap,
    encode_lastpos_bitplane,
    encode_sigmap,
)

# Errors
from gtcodec.errors import (
    DecodeError,
    DimensionError,
)

# Logger
from gtcodec.logger import logger

PIXEL_MAX = 255.0


def reconstruct_weights(
    d: DualGraph,
    indices: np.ndarray,
    step: float,
    m_tilde: int,
    floor: float,
) -> np.ndarray:
    """
    Edge weights from the transmitted dual-GFT indices.

    Dequantize, zero-pad to M, apply the inverse dual GFT and clamp to
    [floor, 1]. Encoder and decoder both go through here.

    Args:
        `d` (DualGraph): Dual graph of the block grid.
        `indices` (np.ndarray): The m_tilde quantization indices.
        `step` (float): Quantization step of the weight coefficients.
        `m_tilde` (int): Number of transmitted coefficients.
        `floor` (float): Smallest reconstructed weight.

    Returns:
        np.ndarray: M weights in [floor, 1].
    """
    indices = np.asarray(indices, dtype=np.int64).ravel()
    if indices.shape[0] != m_tilde:
        raise DimensionError(f"expected {m_tilde} weight indices, got {indices.shape[0]}")

    padded = np.zeros(d.node_count)
    padded[:m_tilde] = indices.astype(np.float64) * step
    return np.clip(d.spectrum.eigenvectors @ padded, floor, 1.0)


def _block(u: np.ndarray, side: int) -> np.ndarray:
    block = np.asarray(u, dtype=np.float64)
    if block.shape != (side, side):
        raise DimensionError(f"expected a {side}x{side} block, got shape {block.shape}")
    return block


def _dct_coefficients(block: np.ndarray, geometry: BlockGeometry) -> np.ndarray:
    return dct2_forward(block).ravel()[geometry.zigzag]


def reconstruct_block(coded: CodedBlock, cfg: EncoderConfig) -> np.ndarray:
    """
    Pixels of a coded block, clipped to [0, 255].

    Args:
        `coded` (CodedBlock): Parsed or freshly chosen syntax elements.
        `cfg` (EncoderConfig): Decoding parameters.

    Returns:
        np.ndarray: side x side float block.
    """
    geometry = get_geometry(cfg.block_side)
    side = geometry.side
    coefficients = coded.coeff_indices.astype(np.float64) * cfg.q

    if coded.use_gft:
        weights = reconstruct_weights(
            geometry.dual,
            coded.graph_indices,
            cfg.delta_set[coded.delta_index],
            cfg.kept_coefficients,
            cfg.weight_floor,
        )
        spectrum = eigendecompose(build_laplacian(geometry.grid, weights))
        pixels = gft_inverse(spectrum, coefficients).reshape(side, side)
    else:
        grid = np.zeros(geometry.pixel_count)
        grid[geometry.zigzag] = coefficients
        pixels = dct2_inverse(grid.reshape(side, side))

    return np.clip(pixels, 0.0, PIXEL_MAX)


def write_block(coder: Union[RangeEncoder, BitCounter], coded: CodedBlock, cfg: EncoderConfig) -> None:
    """Serialize a block, charging each syntax element to its ledger section."""
    with coder.section("flag"):
        coder.encode_bypass(int(coded.use_gft))

    if coded.use_gft:
        with coder.section("delta"):
            coder.encode_bits(coded.delta_index, cfg.delta_bits)
        with coder.section("graph"):
            if cfg.mode == CodingMode.DEPTH:
                encode_sigmap(coder, coded.graph_indices, cfg.kept_coefficients, coder.contexts.sigmap)
            else:
                encode_lastpos_bitplane(coder, coded.graph_indices, cfg.kept_coefficients, coder.contexts.graph)

    with coder.section("coeff"):
        encode_lastpos_bitplane(coder, coded.coeff_indices, cfg.pixel_count, coder.contexts.coeff)


def read_block(
    coder: RangeDecoder,
    cfg: EncoderConfig,
    position: Optional[tuple[int, int]] = None,
) -> CodedBlock:
    """
    Parse the syntax elements of one block.

    Args:
        `coder` (RangeDecoder): Decoder positioned at the block.
        `cfg` (EncoderConfig): Decoding parameters.
        `position` (tuple[int, int] | None): Block row and column, for error messages.

    Returns:
        CodedBlock: The parsed block.
    """
    try:
        with coder.section("flag"):
            use_gft = bool(coder.decode_bypass())

        delta_index = None
        graph_indices = None
        if use_gft:
            with coder.section("delta"):
                delta_index = coder.decode_bits(cfg.delta_bits)
            if delta_index >= len(cfg.delta_set):
                raise DecodeError(f"delta index {delta_index} outside the {len(cfg.delta_set)} configured steps")
            with coder.section("graph"):
                if cfg.mode == CodingMode.DEPTH:
                    graph_indices = decode_sigmap(coder, cfg.kept_coefficients, coder.contexts.sigmap)
                else:
                    graph_indices = decode_lastpos_bitplane(coder, cfg.kept_coefficients, coder.contexts.graph)

        with coder.section("coeff"):
            coeff_indices = decode_lastpos_bitplane(coder, cfg.pixel_count, coder.contexts.coeff)
    except DecodeError as exc:
        if position is None or exc.block is not None:
            raise
        raise DecodeError(str(exc), block=position) from exc

    return CodedBlock(
        use_gft=use_gft,
        delta_index=delta_index,
        graph_indices=graph_indices,
        coeff_indices=coeff_indices,
    )


def decode_block(
    coder: RangeDecoder,
    cfg: EncoderConfig,
    position: Optional[tuple[int, int]] = None,
) -> np.ndarray:
    """Parse and reconstruct one block."""
    return reconstruct_block(read_block(coder, cfg, position), cfg)


def _trial_bits(coded: CodedBlock, cfg: EncoderConfig) -> float:
    # fresh contexts keep every block's decision independent of the others
    counter = BitCounter()
    write_block(counter, coded, cfg)
    return counter.bits


def _learn(
    block: np.ndarray,
    cfg: EncoderConfig,
    geometry: BlockGeometry,
    block_class: BlockClass,
    position: tuple[int, int],
) -> tuple[np.ndarray, bool, int, float]:
    if cfg.graph_source == GraphSource.GAUSSIAN:
        return gaussian_weights(geometry.grid, block), True, 0, 0.0

    params = cfg.learn_params(block_class)
    result = learn_weights(geometry.grid, geometry.dual, block, params)
    if not result.converged:
        logger.debug(f"Block row={position[0]}, col={position[1]} keeps unconverged weights")
    return result.weights, result.converged, result.iterations, result.residual


def analyze_block(
    u: np.ndarray,
    cfg: EncoderConfig,
    position: tuple[int, int] = (0, 0),
) -> EncodedBlock:
    """
    Choose the coding of one block.

    The weights are learned once and scaled to a unit peak; each configured
    step Delta is then tried for their reduced dual-GFT coefficients, and each
    trial is coded for real (bit counter on fresh contexts) to measure its RD
    cost D + gamma R. The best GFT trial competes with the DCT; ties go to the
    DCT.

    Args:
        `u` (np.ndarray): side x side block of intensities.
        `cfg` (EncoderConfig): Encoder configuration.
        `position` (tuple[int, int]): Block row and column.

    Returns:
        EncodedBlock: Chosen syntax, reconstruction and report.
    """
    geometry = get_geometry(cfg.block_side)
    block = _block(u, geometry.side)
    signal = block.ravel()
    q = cfg.q
    gamma = cfg.gamma

    block_class = classify_block(block, cfg.mode, (cfg.t_low, cfg.t_high))

    dct_coefficients = _dct_coefficients(block, geometry)
    dct_indices = quantize(dct_coefficients, q)
    dct_error = dct_coefficients - dct_indices.indices * q
    dct_block = CodedBlock(use_gft=False, coeff_indices=dct_indices.indices)
    dct_bits = _trial_bits(dct_block, cfg)
    dct_distortion = float(dct_error @ dct_error)
    dct_cost = rd_cost(dct_distortion, dct_bits, gamma)

    chosen = dct_block
    chosen_bits = dct_bits
    chosen_distortion = dct_distortion
    rate_rc = float(geometry.dct_frequencies @ (dct_indices.indices.astype(np.float64) ** 2))
    rate_rg = 0.0
    best_gft_cost = None
    converged, iterations, residual = True, 0, 0.0

    if cfg.graph_source != GraphSource.NONE:
        weights, converged, iterations, residual = _learn(block, cfg, geometry, block_class, position)
        m_tilde = cfg.kept_coefficients
        # GFT bases are scale invariant
        weights = weights / weights.max()
        reduced = (geometry.dual.spectrum.eigenvectors.T @ weights)[:m_tilde]

        for delta_index, delta in enumerate(cfg.delta_set):
            graph_indices = quantize(reduced, delta).indices
            coded_weights = reconstruct_weights(geometry.dual, graph_indices, delta, m_tilde, cfg.weight_floor)
            spectrum = eigendecompose(build_laplacian(geometry.grid, coded_weights))

            coefficients = gft_forward(spectrum, signal)
            coeff_indices = quantize(coefficients, q).indices
            error = coefficients - coeff_indices * q
            distortion = float(error @ error)

            candidate = CodedBlock(
                use_gft=True,
                delta_index=delta_index,
                graph_indices=graph_indices,
                coeff_indices=coeff_indices,
            )
            bits = _trial_bits(candidate, cfg)
            cost = rd_cost(distortion, bits, gamma)

            if best_gft_cost is None or cost < best_gft_cost:
                best_gft_cost = cost
                if cost < dct_cost:
                    chosen, chosen_bits, chosen_distortion = candidate, bits, distortion
                    rate_rc = float(spectrum.eigenvalues @ (coeff_indices.astype(np.float64) ** 2))
                    rate_rg = float(np.abs(graph_indices).sum())

    reconstruction = reconstruct_block(chosen, cfg)
    pixel_error = reconstruction - block

    report = BlockReport(
        row=position[0],
        col=position[1],
        label=block_class.label,
        mu1=block_class.mu1,
        mu2=block_class.mu2,
        converged=converged,
        iterations=iterations,
        residual=residual,
        use_gft=chosen.use_gft,
        delta_index=chosen.delta_index,
        rd_cost_gft=best_gft_cost,
        rd_cost_dct=dct_cost,
        distortion=chosen_distortion,
        rate_rc=rate_rc,
        rate_rg=rate_rg,
        trial_bits=chosen_bits,
        pixel_sse=float(np.sum(pixel_error * pixel_error)),
    )
    return EncodedBlock(coded=chosen, reconstruction=reconstruction, report=report)


def encode_block(
    u: np.ndarray,
    cfg: EncoderConfig,
    coder: RangeEncoder,
    position: tuple[int, int] = (0, 0),
) -> EncodedBlock:
    """Analyze a block and serialize it on `coder`; the report carries the coded bits."""
    encoded = analyze_block(u, cfg, position)
    before = dict(coder.ledger)
    write_block(coder, encoded.coded, cfg)
    bits = {name: coder.ledger[name] - before.get(name, 0.0) for name in coder.ledger}
    return encoded.model_copy(update={"report": encoded.report.model_copy(update={"bits": bits})})

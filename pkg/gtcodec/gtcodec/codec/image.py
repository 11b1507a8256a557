"""
Image encoder and decoder.

Bitstream layout (big-endian):

    magic       4 bytes  b"GTO1"
    width       uint16
    height      uint16
    block_side  uint8
    mode        uint8    0 natural, 1 depth
    q           float32
    payload     range-coded blocks in raster order

Images are padded to a multiple of the block side by edge replication; the
padding is cropped on decode.


file: gtcodec/gtcodec/codec/image.py
"""

import os
import struct
import time

import numpy as np

from concurrent.futures import ProcessPoolExecutor
from typing import Optional
from pydantic import ValidationError

# Models
from gtcodec.codec.models import (
    BitstreamHeader,
    CodedBlock,
    EncodedBlock,
    EncodeResult,
)
from gtcodec.config import EncoderConfig
from gtcodec.learn.models import CodingMode

# Codec
from gtcodec.codec.block import (
    analyze_block,
    read_block,
    reconstruct_block,
    write_block,
)

# Entropy
from gtcodec.entropy.range_coder import (
    RangeDecoder,
    RangeEncoder,
)

# Errors
from gtcodec.errors import (
    DecodeError,
    DimensionError,
    InvalidParameterError,
)

# Logger
from gtcodec.logger import logger

MAGIC = b"GTO1"
HEADER = struct.Struct(">4sHHBBf")
MODE_CODES = {
    CodingMode.NATURAL: 0,
    CodingMode.DEPTH: 1,
}


def _as_float32(value: float) -> float:
    return float(np.float32(value))


def _check_image(img: np.ndarray) -> np.ndarray:
    image = np.asarray(img)
    if image.ndim != 2:
        raise DimensionError(f"expected a grayscale image, got shape {image.shape}")
    height, width = image.shape
    if not (1 <= width <= 0xFFFF and 1 <= height <= 0xFFFF):
        raise InvalidParameterError(f"image size {width}x{height} does not fit the bitstream header")
    return image.astype(np.float64)


def pad_image(img: np.ndarray, side: int) -> np.ndarray:
    """Pad to multiples of `side` by replicating the last row and column."""
    height, width = img.shape
    return np.pad(img, ((0, -height % side), (0, -width % side)), mode="edge")


def _blocks(padded: np.ndarray, side: int) -> list[tuple[np.ndarray, tuple[int, int]]]:
    rows, cols = padded.shape[0] // side, padded.shape[1] // side
    return [
        (padded[r * side:(r + 1) * side, c * side:(c + 1) * side], (r, c))
        for r in range(rows)
        for c in range(cols)
    ]


def _analyze_job(job: tuple[np.ndarray, EncoderConfig, tuple[int, int]]) -> EncodedBlock:
    block, cfg, position = job
    return analyze_block(block, cfg, position)


def worker_count(threads: int) -> int:
    return threads if threads > 0 else (os.cpu_count() or 1)


def _analyze_all(jobs: list, workers: int) -> list[EncodedBlock]:
    if workers <= 1 or len(jobs) <= 1:
        return [_analyze_job(job) for job in jobs]

    chunksize = max(1, len(jobs) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as executor:
        # map keeps raster order whatever the completion order
        return list(executor.map(_analyze_job, jobs, chunksize=chunksize))


def encode_image(img: np.ndarray, cfg: EncoderConfig) -> EncodeResult:
    """
    Encode an 8-bit grayscale image.

    Block analysis runs on `cfg.threads` worker processes (0 = one per CPU);
    serialization is a single raster-order pass, so the bitstream does not
    depend on the number of workers.

    Args:
        `img` (np.ndarray): height x width intensities in [0, 255].
        `cfg` (EncoderConfig): Encoder configuration.

    Returns:
        EncodeResult: Bitstream, encoder-side reconstruction and block reports.
    """
    started = time.perf_counter()
    image = _check_image(img)
    height, width = image.shape

    # the header stores q as float32
    cfg = cfg.model_copy(update={"q": _as_float32(cfg.q)})
    header = BitstreamHeader(width=width, height=height, block_side=cfg.block_side, mode=cfg.mode, q=cfg.q)

    side = cfg.block_side
    padded = pad_image(image, side)
    jobs = [(block, cfg, position) for block, position in _blocks(padded, side)]
    workers = worker_count(cfg.threads)
    logger.debug(f"Analyzing {len(jobs)} blocks with {min(workers, len(jobs))} worker(s)")
    encoded_blocks = _analyze_all(jobs, workers)

    coder = RangeEncoder()
    reports = []
    reconstruction = np.zeros_like(padded)
    for encoded in encoded_blocks:
        before = dict(coder.ledger)
        write_block(coder, encoded.coded, cfg)
        bits = {name: coder.ledger[name] - before.get(name, 0.0) for name in coder.ledger}
        reports.append(encoded.report.model_copy(update={"bits": bits}))

        r, c = encoded.report.row, encoded.report.col
        reconstruction[r * side:(r + 1) * side, c * side:(c + 1) * side] = encoded.reconstruction

    payload = coder.finish()
    bitstream = HEADER.pack(MAGIC, width, height, side, MODE_CODES[cfg.mode], cfg.q) + payload

    result = EncodeResult(
        header=header,
        bitstream=bitstream,
        reconstruction=np.rint(reconstruction[:height, :width]).astype(np.uint8),
        reports=reports,
        ledger=dict(coder.ledger),
    )

    unconverged = sum(not report.converged for report in reports)
    logger.info(
        f"Encoded {width}x{height} image: blocks={len(reports)}, gft_share={result.gft_share:.3f}, "
        f"bpp={result.bpp:.4f}, unconverged={unconverged}, elapsed={time.perf_counter() - started:.2f}s"
    )
    return result


def parse_header(bs: bytes) -> tuple[BitstreamHeader, bytes]:
    """
    Split a bitstream into its header and entropy payload.

    Args:
        `bs` (bytes): Complete bitstream.

    Returns:
        tuple[BitstreamHeader, bytes]: Header fields and payload.
    """
    if len(bs) < HEADER.size:
        raise DecodeError(f"bitstream is shorter than its {HEADER.size}-byte header")

    magic, width, height, side, mode_code, q = HEADER.unpack_from(bs)
    if magic != MAGIC:
        raise DecodeError(f"bad magic {magic!r}, expected {MAGIC!r}")

    modes = {code: mode for mode, code in MODE_CODES.items()}
    if mode_code not in modes:
        raise DecodeError(f"unknown coding mode {mode_code}")
    if not np.isfinite(q):
        raise DecodeError("quantization step is not finite")

    try:
        header = BitstreamHeader(width=width, height=height, block_side=side, mode=modes[mode_code], q=q)
    except ValidationError as exc:
        raise DecodeError(f"invalid header: {exc.errors()[0]['loc'][0]} {exc.errors()[0]['msg']}") from exc

    return header, bs[HEADER.size:]


def decoding_config(header: BitstreamHeader, cfg: Optional[EncoderConfig] = None) -> EncoderConfig:
    """Decoder parameters: the header fields over `cfg` (or the defaults)."""
    base = cfg if cfg is not None else EncoderConfig()
    values = base.model_dump()
    values.update(q=header.q, mode=header.mode, block_side=header.block_side)
    try:
        return EncoderConfig(**values)
    except ValidationError as exc:
        raise DecodeError(f"bitstream header is incompatible with the decoder configuration: {exc}") from exc


def read_bitstream(bs: bytes, cfg: Optional[EncoderConfig] = None) -> tuple[BitstreamHeader, list[CodedBlock]]:
    """
    Parse a bitstream without reconstructing it.

    Args:
        `bs` (bytes): Complete bitstream.
        `cfg` (EncoderConfig | None): Parameters absent from the header.

    Returns:
        tuple[BitstreamHeader, list[CodedBlock]]: Header and blocks in raster order.
    """
    header, payload = parse_header(bs)
    cfg = decoding_config(header, cfg)

    coder = RangeDecoder(payload)
    blocks = [
        read_block(coder, cfg, (r, c))
        for r in range(header.block_rows)
        for c in range(header.block_cols)
    ]
    coder.finish()
    return header, blocks


def decode_image(bs: bytes, cfg: Optional[EncoderConfig] = None) -> np.ndarray:
    """
    Decode a bitstream into an 8-bit image.

    Args:
        `bs` (bytes): Complete bitstream.
        `cfg` (EncoderConfig | None): Parameters absent from the header
            (delta set, m_tilde, weight floor); defaults when None.

    Returns:
        np.ndarray: height x width uint8 image.
    """
    started = time.perf_counter()
    header, blocks = read_bitstream(bs, cfg)
    cfg = decoding_config(header, cfg)

    side = header.block_side
    image = np.zeros((header.block_rows * side, header.block_cols * side))
    for index, coded in enumerate(blocks):
        r, c = divmod(index, header.block_cols)
        image[r * side:(r + 1) * side, c * side:(c + 1) * side] = reconstruct_block(coded, cfg)

    logger.info(
        f"Decoded {header.width}x{header.height} image: blocks={len(blocks)}, "
        f"elapsed={time.perf_counter() - started:.2f}s"
    )
    return np.rint(image[:header.height, :header.width]).astype(np.uint8)

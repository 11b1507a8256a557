"""
Rate-distortion sweeps and model-validation studies.


file: gtcodec/gtcodec/evaluation/studies.py
"""

import numpy as np

from gtcodec._compat import StrEnum
from typing import Sequence
from pydantic import (
    BaseModel,
    ConfigDict,
)

# Models
from gtcodec.codec.models import EncodeResult
from gtcodec.config import (
    EncoderConfig,
    GraphSource,
)
from gtcodec.learn.models import ClassLabel
from gtcodec.evaluation.metrics import (
    RDCurve,
    RDPoint,
    pearson,
    psnr,
    spearman,
)

# Codec
from gtcodec.codec.image import (
    decode_image,
    encode_image,
)
from gtcodec.evaluation.klt import klt_code_image

# Errors
from gtcodec.errors import (
    CodecError,
    ConfigError,
    EvaluationError,
)

# Logger
from gtcodec.logger import logger

GRAPH_SECTIONS = ("flag", "delta", "graph")


class Method(StrEnum):
    LEARNED = "learned"
    GAUSSIAN = "gaussian"
    DCT = "dct"
    KLT = "klt"


METHOD_SOURCES = {
    Method.LEARNED: GraphSource.LEARNED,
    Method.GAUSSIAN: GraphSource.GAUSSIAN,
    Method.DCT: GraphSource.NONE,
}


class RateModelRow(BaseModel):
    """Theoretical and measured quantities of one image coded at one q."""

    model_config = ConfigDict(frozen=True)

    q: float
    actual_bits: int
    theoretical_rate: float
    mean_block_distortion: float
    model_distortion: float


def parse_methods(text: str) -> list[Method]:
    try:
        methods = [Method(item.strip()) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise ConfigError(f"unknown method in {text!r}; choose from {', '.join(Method)}") from exc
    if not methods:
        raise ConfigError("at least one method is required")
    return list(dict.fromkeys(methods))


def parse_q_list(text: str) -> list[float]:
    try:
        values = [float(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise ConfigError(f"q list {text!r} is not a comma-separated list of numbers") from exc
    return _checked_q_list(values)


def _checked_q_list(q_list: Sequence[float]) -> list[float]:
    values = [float(q) for q in q_list]
    if not values:
        raise ConfigError("the q list is empty")
    if any(not value > 0 for value in values):
        raise ConfigError("every q must be positive")
    return values


def graph_fraction(result: EncodeResult) -> float:
    """Share of the coded bits spent on the flag, the delta index and the graph."""
    total = sum(result.ledger.values())
    if total <= 0:
        return 0.0
    return sum(result.ledger.get(name, 0.0) for name in GRAPH_SECTIONS) / total


def _method_of(cfg: EncoderConfig) -> Method:
    return {source: method for method, source in METHOD_SOURCES.items()}[cfg.graph_source]


def encode_at(img: np.ndarray, cfg: EncoderConfig, q: float, method: Method = Method.LEARNED) -> EncodeResult:
    """Encode `img` at step `q` with the graph source of `method`."""
    if method not in METHOD_SOURCES:
        raise ConfigError(f"method {method} does not use the graph codec")
    return encode_image(img, cfg.model_copy(update={"q": q, "graph_source": METHOD_SOURCES[method]}))


def rd_point(img: np.ndarray, cfg: EncoderConfig, q: float, method: Method) -> RDPoint:
    """
    One rate-distortion point of `method` at step `q`.

    The graph methods go through a full encode and decode; the KLT baseline
    only through its transform, quantizer and entropy coder.
    """
    if method == Method.KLT:
        result = klt_code_image(img, cfg, q)
        return RDPoint(rate=result.bpp, psnr=psnr(img, result.reconstruction), q=q, graph_fraction=0.0)

    result = encode_at(img, cfg, q, method)
    decoded = decode_image(result.bitstream, cfg)
    if not np.array_equal(decoded, result.reconstruction):
        raise CodecError("decoder reconstruction differs from the encoder reconstruction")
    return RDPoint(rate=result.bpp, psnr=psnr(img, decoded), q=q, graph_fraction=graph_fraction(result))


def sweep(img: np.ndarray, cfg: EncoderConfig, q_list: Sequence[float], method: Method) -> RDCurve:
    """
    Rate-distortion curve of `method` over `q_list`.

    Args:
        `img` (np.ndarray): 8-bit grayscale image.
        `cfg` (EncoderConfig): Template configuration; q and the graph source are overridden.
        `q_list` (Sequence[float]): Quantization steps.
        `method` (Method): Coding method.

    Returns:
        RDCurve: One point per q.
    """
    points = []
    for q in _checked_q_list(q_list):
        point = rd_point(img, cfg, q, method)
        logger.info(f"{method} q={q:g}: bpp={point.rate:.4f} psnr={point.psnr:.2f}")
        points.append(point)
    return RDCurve(points=points)


def block_theoretical_rate(result: EncodeResult) -> float:
    """Sum over blocks of the eigenvalue-weighted coefficient energy and the graph l1 rate, in index units."""
    return float(sum(report.rate_rc + report.rate_rg for report in result.reports))


def rate_model_study(img: np.ndarray, cfg: EncoderConfig, q_list: Sequence[float]) -> list[RateModelRow]:
    """Encode once per q and collect the rate and distortion model quantities."""
    n = cfg.pixel_count
    rows = []
    for q in _checked_q_list(q_list):
        result = encode_at(img, cfg, q, _method_of(cfg))
        coded_q = result.header.q
        distortions = [report.distortion for report in result.reports]
        rows.append(RateModelRow(
            q=q,
            actual_bits=result.total_bits,
            theoretical_rate=block_theoretical_rate(result),
            mean_block_distortion=float(np.mean(distortions)),
            model_distortion=coded_q * coded_q * n / 12.0,
        ))
    return rows


def rate_model_correlation(img: np.ndarray, cfg: EncoderConfig, q_list: Sequence[float]) -> float:
    """
    Pearson correlation between the theoretical and the actual total rate over q.

    Args:
        `img` (np.ndarray): 8-bit grayscale image.
        `cfg` (EncoderConfig): Encoder configuration.
        `q_list` (Sequence[float]): At least two steps.

    Returns:
        float: Correlation coefficient.
    """
    rows = rate_model_study(img, cfg, q_list)
    return correlation_of(rows)


def correlation_of(rows: Sequence[RateModelRow]) -> float:
    return pearson(
        np.array([row.theoretical_rate for row in rows]),
        np.array([row.actual_bits for row in rows], dtype=np.float64),
    )


def distortion_model_study(img: np.ndarray, cfg: EncoderConfig, q_list: Sequence[float]) -> list[RateModelRow]:
    """Measured mean block distortion against the high-rate model q^2 N / 12, per q."""
    rows = rate_model_study(img, cfg, q_list)
    for row in rows:
        logger.info(
            f"q={row.q:g}: mean block distortion={row.mean_block_distortion:.2f}, "
            f"model={row.model_distortion:.2f}"
        )
    return rows


def graph_rate_fraction(img: np.ndarray, cfg: EncoderConfig, q_list: Sequence[float]) -> list[tuple[float, float]]:
    """
    Share of the bitrate spent on graph side information, per q.

    Args:
        `img` (np.ndarray): 8-bit grayscale image.
        `cfg` (EncoderConfig): Encoder configuration.
        `q_list` (Sequence[float]): Quantization steps.

    Returns:
        list[tuple[float, float]]: (total bpp, fraction) per q.
    """
    series = []
    for q in _checked_q_list(q_list):
        result = encode_at(img, cfg, q, _method_of(cfg))
        series.append((result.bpp, graph_fraction(result)))
    return series


def fraction_trend(series: Sequence[tuple[float, float]]) -> float:
    """Spearman correlation between total bpp and graph fraction."""
    bpp, fraction = zip(*series)
    return spearman(np.array(bpp), np.array(fraction))


def class_rd_point(result: EncodeResult, original: np.ndarray, label: ClassLabel) -> RDPoint:
    """
    Rate and PSNR restricted to the blocks of one class.

    Args:
        `result` (EncodeResult): Encoded image with its block reports.
        `original` (np.ndarray): Source image.
        `label` (ClassLabel): Block class.

    Returns:
        RDPoint: Bits per pixel and PSNR over the pixels of those blocks.
    """
    side = result.header.block_side
    mask = np.zeros(np.asarray(original).shape, dtype=bool)
    bits = 0.0
    for report in result.reports:
        if report.label == label:
            mask[report.row * side:(report.row + 1) * side, report.col * side:(report.col + 1) * side] = True
            bits += report.total_bits

    pixels = int(mask.sum())
    if pixels == 0:
        raise EvaluationError(f"no block of class {label}")
    return RDPoint(
        rate=bits / pixels,
        psnr=psnr(np.asarray(original)[mask], result.reconstruction[mask]),
        q=result.header.q,
    )

"""
CSV output of the evaluation commands.

Files are UTF-8 with LF line endings and '.' as decimal separator.


file: gtcodec/gtcodec/evaluation/report.py
"""

import csv

from pathlib import Path
from typing import (
    Iterable,
    Sequence,
)

# Models
from gtcodec.evaluation.metrics import RDCurve
from gtcodec.evaluation.studies import (
    Method,
    RateModelRow,
)

SWEEP_HEADER = ("image", "method", "q", "bpp", "psnr_db", "graph_bpp_fraction")
VALIDATE_HEADER = ("image", "q", "actual_bits", "theoretical_rate", "mean_block_distortion", "model_distortion")


def _number(value: float) -> str:
    return f"{value:.6f}"


def sweep_rows(image: str, curves: Iterable[tuple[Method, RDCurve]]) -> list[tuple[str, ...]]:
    rows = []
    for method, curve in curves:
        for point in curve.points:
            rows.append((
                image,
                str(method),
                f"{point.q:g}",
                _number(point.rate),
                "inf" if point.lossless else _number(point.psnr),
                _number(point.graph_fraction),
            ))
    return rows


def validate_rows(image: str, rows: Sequence[RateModelRow]) -> list[tuple[str, ...]]:
    return [
        (
            image,
            f"{row.q:g}",
            str(row.actual_bits),
            _number(row.theoretical_rate),
            _number(row.mean_block_distortion),
            _number(row.model_distortion),
        )
        for row in rows
    ]


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[str]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)

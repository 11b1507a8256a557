"""
Evaluation module: metrics, baselines and model-validation studies.

file: gtcodec/gtcodec/evaluation/__init__.py
"""

from gtcodec.evaluation.metrics import (
    RDCurve,
    RDPoint,
    bd_psnr,
    pearson,
    psnr,
    spearman,
)
from gtcodec.evaluation.klt import (
    KltResult,
    KltTransform,
    energy_compaction,
    klt_code_image,
    klt_train,
)
from gtcodec.evaluation.studies import (
    Method,
    RateModelRow,
    class_rd_point,
    correlation_of,
    distortion_model_study,
    encode_at,
    fraction_trend,
    graph_fraction,
    graph_rate_fraction,
    parse_methods,
    parse_q_list,
    rate_model_correlation,
    rate_model_study,
    rd_point,
    sweep,
)
from gtcodec.evaluation.report import (
    SWEEP_HEADER,
    VALIDATE_HEADER,
    sweep_rows,
    validate_rows,
    write_csv,
)

__all__ = [
    "RDCurve",
    "RDPoint",
    "bd_psnr",
    "pearson",
    "psnr",
    "spearman",
    "KltResult",
    "KltTransform",
    "energy_compaction",
    "klt_code_image",
    "klt_train",
    "Method",
    "RateModelRow",
    "class_rd_point",
    "correlation_of",
    "distortion_model_study",
    "encode_at",
    "fraction_trend",
    "graph_fraction",
    "graph_rate_fraction",
    "parse_methods",
    "parse_q_list",
    "rate_model_correlation",
    "rate_model_study",
    "rd_point",
    "sweep",
    "SWEEP_HEADER",
    "VALIDATE_HEADER",
    "sweep_rows",
    "validate_rows",
    "write_csv",
]

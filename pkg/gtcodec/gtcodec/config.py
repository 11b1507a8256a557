"""
Encoder configuration and the flat key=value configuration file.

Values are layered as defaults < config file < command-line flags.


file: gtcodec/gtcodec/config.py
"""

from gtcodec._compat import StrEnum
from pathlib import Path
from typing import (
    Any,
    Optional,
)
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)

# Models
from gtcodec.learn.models import (
    BlockClass,
    ClassLabel,
    CodingMode,
    LearnParams,
)
from gtcodec.learn.classify import default_params

# Errors
from gtcodec.errors import ConfigError

# Logger
from gtcodec.logger import logger

DEFAULT_DELTA_SET = (0.01, 0.02, 0.04, 0.08, 0.12, 0.2, 0.35, 0.6)
DEFAULT_M_TILDE = {
    CodingMode.NATURAL: 64,
    CodingMode.DEPTH: 256,
}


class GraphSource(StrEnum):
    LEARNED = "learned"
    GAUSSIAN = "gaussian"
    NONE = "none"  # DCT only


class EncoderConfig(BaseModel):
    """Every tunable of the encoder. Immutable once built."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    q: float = Field(default=10.0, gt=0.0)
    mode: CodingMode = CodingMode.NATURAL
    block_side: int = Field(default=16, ge=2, le=255)
    delta_set: tuple[float, ...] = DEFAULT_DELTA_SET
    m_tilde: Optional[int] = Field(default=None, ge=1)
    gamma_scale: float = Field(default=0.85 / 12.0, gt=0.0)
    t_low: float = Field(default=25.0, ge=0.0)
    t_high: float = Field(default=400.0, ge=0.0)
    graph_source: GraphSource = GraphSource.LEARNED
    weight_floor: float = Field(default=1e-4, gt=0.0, le=1.0)
    max_iter: int = Field(default=3000, ge=1)
    stationarity_tol: float = Field(default=1e-4, gt=0.0)
    alpha: dict[ClassLabel, float] = Field(default_factory=dict)
    beta: dict[ClassLabel, float] = Field(default_factory=dict)
    threads: int = Field(default=0, ge=0)

    @field_validator("delta_set")
    @classmethod
    def _increasing(cls, value: tuple[float, ...]) -> tuple[float, ...]:
        if not value:
            raise ValueError("delta_set must not be empty")
        if len(value) > 256:
            raise ValueError("delta_set holds at most 256 steps")
        if value[0] <= 0:
            raise ValueError("delta_set steps must be positive")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError("delta_set must be strictly increasing")
        return value

    @field_validator("alpha")
    @classmethod
    def _nonnegative_alpha(cls, value: dict[ClassLabel, float]) -> dict[ClassLabel, float]:
        if any(v < 0 for v in value.values()):
            raise ValueError("alpha overrides must be >= 0")
        return value

    @field_validator("beta")
    @classmethod
    def _positive_beta(cls, value: dict[ClassLabel, float]) -> dict[ClassLabel, float]:
        if any(v <= 0 for v in value.values()):
            raise ValueError("beta overrides must be > 0")
        return value

    @model_validator(mode="after")
    def _m_tilde_fits(self) -> "EncoderConfig":
        if self.m_tilde is not None and self.m_tilde > self.edge_count:
            raise ValueError(f"m_tilde={self.m_tilde} exceeds the {self.edge_count} edges of a block")
        return self

    @property
    def pixel_count(self) -> int:
        return self.block_side * self.block_side

    @property
    def edge_count(self) -> int:
        return 2 * self.block_side * (self.block_side - 1)

    @property
    def kept_coefficients(self) -> int:
        """Number of dual-GFT coefficients of the weights that are transmitted."""
        if self.m_tilde is not None:
            return self.m_tilde
        return min(DEFAULT_M_TILDE[self.mode], self.edge_count)

    @property
    def gamma(self) -> float:
        return self.gamma_scale * self.q * self.q

    @property
    def delta_bits(self) -> int:
        return (len(self.delta_set) - 1).bit_length()

    def learn_params(self, block_class: BlockClass) -> LearnParams:
        """Solver parameters for a block class, with the configured overrides applied."""
        params = default_params(block_class, self.mode)
        return params.model_copy(update={
            "alpha": self.alpha.get(block_class.label, params.alpha),
            "beta": self.beta.get(block_class.label, params.beta),
            "max_iter": self.max_iter,
            "stationarity_tol": self.stationarity_tol,
        })


LIST_KEYS = {"delta_set"}


def _parse_lines(text: str, source: str) -> dict[str, Any]:
    values: dict[str, Any] = {}
    alpha: dict[str, str] = {}
    beta: dict[str, str] = {}

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{number}: expected key=value, got {raw.strip()!r}")

        key, value = (part.strip() for part in line.split("=", 1))
        if key.startswith("alpha_"):
            alpha[key.removeprefix("alpha_")] = value
        elif key.startswith("beta_"):
            beta[key.removeprefix("beta_")] = value
        elif key in LIST_KEYS:
            values[key] = [item.strip() for item in value.split(",") if item.strip()]
        elif key in EncoderConfig.model_fields and key not in ("alpha", "beta"):
            values[key] = value
        else:
            raise ConfigError(f"{source}:{number}: unknown key {key!r}")

    if alpha:
        values["alpha"] = alpha
    if beta:
        values["beta"] = beta
    return values


def load_config(path: str | Path) -> EncoderConfig:
    """
    Read a flat key=value configuration file.

    Args:
        `path` (str | Path): Location of the file.

    Returns:
        EncoderConfig: The validated configuration.
    """
    return resolve_config(path)


def resolve_config(path: Optional[str | Path] = None, **overrides: Any) -> EncoderConfig:
    """
    Build a configuration from defaults, an optional file and explicit overrides.

    Overrides that are None are ignored, so unset command-line flags leave the
    file values in place.

    Args:
        `path` (str | Path | None): Optional configuration file.
        `overrides`: Field values that take precedence over the file.

    Returns:
        EncoderConfig: The validated configuration.
    """
    values: dict[str, Any] = {}
    if path is not None:
        path = Path(path)
        text = path.read_text(encoding="utf-8")
        values.update(_parse_lines(text, str(path)))
        logger.debug(f"Loaded {len(values)} settings from {path}")

    values.update({key: value for key, value in overrides.items() if value is not None})

    try:
        return EncoderConfig(**values)
    except ValidationError as exc:
        problems = "; ".join(
            f"{'.'.join(str(part) for part in error['loc']) or 'config'}: {error['msg']}"
            for error in exc.errors()
        )
        raise ConfigError(f"invalid configuration: {problems}") from exc

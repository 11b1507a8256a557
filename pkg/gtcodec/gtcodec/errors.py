"""
Exception hierarchy shared by every stage of the codec.

Each class carries the exit code the command-line front end maps it to.


file: gtcodec/gtcodec/errors.py
"""

from typing import Optional


class CodecError(Exception):
    """Base class of every error raised by gtcodec."""

    exit_code: int = 3


class InvalidParameterError(CodecError, ValueError):
    """A scalar parameter is outside its valid range."""


class DimensionError(CodecError, ValueError):
    """Vector or matrix shapes do not agree."""


class DomainError(CodecError, ValueError):
    """An input lies outside the mathematical domain of an operation."""


class EmptyGraphError(CodecError, ValueError):
    """The operation needs at least one edge."""


class NumericalError(CodecError, ArithmeticError):
    """A numerical routine failed to converge."""


class CoefficientOverflowError(CodecError, OverflowError):
    """A quantized magnitude does not fit the bitplane syntax."""


class DecodeError(CodecError):
    """The bitstream or the entropy payload is malformed."""

    exit_code = 4

    def __init__(self, message: str, block: Optional[tuple[int, int]] = None) -> None:
        if block is not None:
            message = f"{message} (block row={block[0]}, col={block[1]})"
        super().__init__(message)
        self.block = block


class ConfigError(CodecError):
    """Configuration file or command-line values are invalid."""

    exit_code = 2


class EvaluationError(CodecError):
    """An evaluation statistic is undefined for the given data."""

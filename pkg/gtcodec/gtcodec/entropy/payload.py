"""
Coefficient payload syntaxes.

Two ways to code a vector of quantization indices:

* last-position + bitplanes: the position of the last nonzero entry, the
  number of magnitude bitplanes B_max, then every plane from the most
  significant one over the leading entries, with a sign right after each
  entry's first one-bit. B_max is in 1..32, so its 5-bit field stores
  B_max - 1;
* significance map: one flag per entry, then Exp-Golomb magnitudes and signs
  of the flagged entries. Better when the nonzero entries are few and spread.

The encoders accept any coder with the `RangeEncoder` interface
(`RangeEncoder` or `BitCounter`).


file: gtcodec/gtcodec/entropy/payload.py
"""

import numpy as np

from typing import (
    Optional,
    Union,
)

# Entropy
from gtcodec.entropy.quantizer import QuantizedCoeffs
from gtcodec.entropy.range_coder import (
    BitCounter,
    ContextModel,
    RangeDecoder,
    RangeEncoder,
)

# Errors
from gtcodec.errors import (
    CoefficientOverflowError,
    DecodeError,
    DimensionError,
)

Encoder = Union[RangeEncoder, BitCounter]

MAGNITUDE_LIMIT = 1 << 32
PLANE_COUNT_BITS = 5
EXP_GOLOMB_MAX_PREFIX = 32
SIGMAP_BUCKETS = (1, 16, 64)


def _indices(k: Union[QuantizedCoeffs, np.ndarray], n_max: int) -> np.ndarray:
    indices = k.indices if isinstance(k, QuantizedCoeffs) else np.asarray(k, dtype=np.int64).ravel()
    if indices.shape[0] != n_max:
        raise DimensionError(f"expected {n_max} indices, got {indices.shape[0]}")
    if indices.size and int(np.max(np.abs(indices))) >= MAGNITUDE_LIMIT:
        raise CoefficientOverflowError("coefficient magnitude does not fit in 32 bitplanes")
    return indices


def position_bits(n_max: int) -> int:
    """Bits of the last-position field, ceil(log2(n_max + 1))."""
    return int(n_max).bit_length()


def encode_lastpos_bitplane(
    coder: Encoder,
    k: Union[QuantizedCoeffs, np.ndarray],
    n_max: int,
    model: Optional[ContextModel] = None,
) -> None:
    """
    Code `k` with the last-position + bitplane syntax.

    The context of a plane bit is 2 * (previous entry already significant)
    + (this entry already significant).

    Args:
        `coder`: Range encoder or bit counter.
        `k` (QuantizedCoeffs | np.ndarray): n_max indices.
        `n_max` (int): Vector length.
        `model` (ContextModel | None): Context bank, the coder's coefficient bank by default.
    """
    model = model if model is not None else coder.contexts.coeff
    indices = _indices(k, n_max)

    nonzero = np.flatnonzero(indices)
    last = int(nonzero[-1]) + 1 if nonzero.size else 0
    coder.encode_bits(last, position_bits(n_max))
    if last == 0:
        return

    magnitudes = [int(abs(value)) for value in indices[:last]]
    negative = [bool(value < 0) for value in indices[:last]]
    planes = max(magnitudes).bit_length()
    # 32 planes fit the field as 31
    coder.encode_bits(planes - 1, PLANE_COUNT_BITS)

    significant = [False] * last
    for plane in range(planes - 1, -1, -1):
        previous = 0
        for i in range(last):
            bit = (magnitudes[i] >> plane) & 1
            coder.encode_bit(model, 2 * previous + significant[i], bit)
            if bit and not significant[i]:
                significant[i] = True
                coder.encode_bypass(int(negative[i]))
            previous = int(significant[i])


def decode_lastpos_bitplane(
    coder: RangeDecoder,
    n_max: int,
    model: Optional[ContextModel] = None,
) -> np.ndarray:
    """Mirror of `encode_lastpos_bitplane`; returns the n_max indices."""
    model = model if model is not None else coder.contexts.coeff

    last = coder.decode_bits(position_bits(n_max))
    if last > n_max:
        raise DecodeError(f"last position {last} exceeds the {n_max} coded entries")

    indices = np.zeros(n_max, dtype=np.int64)
    if last == 0:
        return indices

    planes = coder.decode_bits(PLANE_COUNT_BITS) + 1
    magnitudes = [0] * last
    negative = [False] * last
    significant = [False] * last
    for plane in range(planes - 1, -1, -1):
        previous = 0
        for i in range(last):
            bit = coder.decode_bit(model, 2 * previous + significant[i])
            if bit:
                magnitudes[i] |= 1 << plane
                if not significant[i]:
                    significant[i] = True
                    negative[i] = bool(coder.decode_bypass())
            previous = int(significant[i])

    if magnitudes[-1] == 0:
        raise DecodeError("last significant entry decoded as zero")

    for i, magnitude in enumerate(magnitudes):
        indices[i] = -magnitude if negative[i] else magnitude
    return indices


def _bucket(position: int) -> int:
    for bucket, limit in enumerate(SIGMAP_BUCKETS):
        if position < limit:
            return bucket
    return len(SIGMAP_BUCKETS)


def _encode_exp_golomb(coder: Encoder, value: int) -> None:
    shifted = value + 1
    prefix = shifted.bit_length() - 1
    coder.encode_bits(0, prefix)
    coder.encode_bits(shifted, prefix + 1)


def _decode_exp_golomb(coder: RangeDecoder) -> int:
    prefix = 0
    while not coder.decode_bypass():
        prefix += 1
        if prefix > EXP_GOLOMB_MAX_PREFIX:
            raise DecodeError("Exp-Golomb prefix is too long")
    return ((1 << prefix) | coder.decode_bits(prefix)) - 1


def encode_sigmap(
    coder: Encoder,
    k: Union[QuantizedCoeffs, np.ndarray],
    n_max: int,
    model: Optional[ContextModel] = None,
) -> None:
    """
    Code `k` as a significance map followed by Exp-Golomb-0 magnitudes.

    Flag contexts follow the position bucket {0, 1-15, 16-63, 64+}.

    Args:
        `coder`: Range encoder or bit counter.
        `k` (QuantizedCoeffs | np.ndarray): n_max indices.
        `n_max` (int): Vector length.
        `model` (ContextModel | None): Context bank, the coder's significance bank by default.
    """
    model = model if model is not None else coder.contexts.sigmap
    indices = _indices(k, n_max)

    for position, value in enumerate(indices):
        coder.encode_bit(model, _bucket(position), int(value != 0))

    for value in indices[indices != 0]:
        _encode_exp_golomb(coder, int(abs(value)) - 1)
        coder.encode_bypass(int(value < 0))


def decode_sigmap(
    coder: RangeDecoder,
    n_max: int,
    model: Optional[ContextModel] = None,
) -> np.ndarray:
    """Mirror of `encode_sigmap`; returns the n_max indices."""
    model = model if model is not None else coder.contexts.sigmap

    flags = [coder.decode_bit(model, _bucket(position)) for position in range(n_max)]
    indices = np.zeros(n_max, dtype=np.int64)
    for position, flag in enumerate(flags):
        if flag:
            magnitude = _decode_exp_golomb(coder) + 1
            indices[position] = -magnitude if coder.decode_bypass() else magnitude
    return indices

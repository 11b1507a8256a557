"""
Adaptive binary range coder.

32-bit LZMA-style coder: 12-bit probabilities of a zero bit, exponential
adaptation with shift 5, carry propagation through a cached byte, and
equiprobable bypass bits. `BitCounter` mirrors the encoder interface and only
accumulates the ideal cost of the same decisions, which is what the encoder's
rate-distortion search uses.

Every coder keeps a ledger of bits per syntax category, filled through
`with coder.section(name):`.


file: gtcodec/gtcodec/entropy/range_coder.py
"""

import math

from collections import defaultdict
from contextlib import contextmanager
from typing import (
    Iterator,
    Optional,
)

# Errors
from gtcodec.errors import DecodeError

PROB_BITS = 12
PROB_ONE = 1 << PROB_BITS
PROB_INIT = PROB_ONE // 2
ADAPT_SHIFT = 5
TOP = 1 << 24
MASK32 = 0xFFFFFFFF

# ideal cost in bits of coding a zero when the zero-probability state is p
ZERO_COST = [0.0] + [-math.log2(p / PROB_ONE) for p in range(1, PROB_ONE)]


def _bit_cost(p: int, bit: int) -> float:
    return ZERO_COST[p] if bit == 0 else ZERO_COST[PROB_ONE - p]


class ContextModel:
    """A bank of adaptive probability states."""

    def __init__(self, size: int) -> None:
        self.probs = [PROB_INIT] * size

    def __len__(self) -> int:
        return len(self.probs)

    def clone(self) -> "ContextModel":
        model = ContextModel(0)
        model.probs = list(self.probs)
        return model

    def update(self, index: int, bit: int) -> None:
        p = self.probs[index]
        if bit:
            self.probs[index] = p - (p >> ADAPT_SHIFT)
        else:
            self.probs[index] = p + ((PROB_ONE - p) >> ADAPT_SHIFT)


class CodingContexts:
    """
    Context banks of one codestream.

    `coeff` serves the transform coefficients, `graph` the last-position coding
    of graph coefficients, `sigmap` the significance map.
    """

    def __init__(self) -> None:
        self.coeff = ContextModel(4)
        self.graph = ContextModel(4)
        self.sigmap = ContextModel(4)

    def clone(self) -> "CodingContexts":
        contexts = CodingContexts()
        contexts.coeff = self.coeff.clone()
        contexts.graph = self.graph.clone()
        contexts.sigmap = self.sigmap.clone()
        return contexts


class _Ledger:
    def __init__(self, contexts: Optional[CodingContexts] = None) -> None:
        self.contexts = contexts if contexts is not None else CodingContexts()
        self.ledger: dict[str, float] = defaultdict(float)
        self._section = "other"

    @contextmanager
    def section(self, name: str) -> Iterator[None]:
        previous, self._section = self._section, name
        try:
            yield
        finally:
            self._section = previous

    def _charge(self, bits: float) -> None:
        self.ledger[self._section] += bits

    @property
    def bits(self) -> float:
        return float(sum(self.ledger.values()))


class RangeEncoder(_Ledger):
    def __init__(self, contexts: Optional[CodingContexts] = None) -> None:
        super().__init__(contexts)
        self.low = 0
        self.range = MASK32
        self.cache = 0
        self.cache_size = 1
        self.output = bytearray()
        self._finished = False

    def _shift_low(self) -> None:
        if (self.low & MASK32) < 0xFF000000 or self.low > MASK32:
            carry = self.low >> 32
            temp = self.cache
            while True:
                self.output.append((temp + carry) & 0xFF)
                temp = 0xFF
                self.cache_size -= 1
                if self.cache_size == 0:
                    break
            self.cache = (self.low >> 24) & 0xFF
        self.cache_size += 1
        self.low = (self.low & 0x00FFFFFF) << 8

    def _normalize(self) -> None:
        while self.range < TOP:
            self.range <<= 8
            self._shift_low()

    def encode_bit(self, model: ContextModel, index: int, bit: int) -> None:
        p = model.probs[index]
        bound = (self.range >> PROB_BITS) * p
        if bit:
            self.low += bound
            self.range -= bound
        else:
            self.range = bound
        self._charge(_bit_cost(p, bit))
        model.update(index, bit)
        self._normalize()

    def encode_bypass(self, bit: int) -> None:
        self.range >>= 1
        if bit:
            self.low += self.range
        self._charge(1.0)
        self._normalize()

    def encode_bits(self, value: int, count: int) -> None:
        """Write `count` bypass bits of `value`, most significant first."""
        for shift in range(count - 1, -1, -1):
            self.encode_bypass((value >> shift) & 1)

    def finish(self) -> bytes:
        """Flush the coder and return the payload."""
        if not self._finished:
            for _ in range(5):
                self._shift_low()
            self._finished = True
        # the first byte is the initial empty cache
        return bytes(self.output[1:])


class RangeDecoder(_Ledger):
    def __init__(self, data: bytes, contexts: Optional[CodingContexts] = None) -> None:
        super().__init__(contexts)
        self.data = bytes(data)
        self.position = 0
        self.range = MASK32
        self.code = 0
        for _ in range(4):
            self.code = (self.code << 8) | self._next_byte()

    def _next_byte(self) -> int:
        if self.position >= len(self.data):
            raise DecodeError("entropy payload is truncated")
        byte = self.data[self.position]
        self.position += 1
        return byte

    def _normalize(self) -> None:
        while self.range < TOP:
            self.range <<= 8
            self.code = ((self.code << 8) | self._next_byte()) & MASK32

    def decode_bit(self, model: ContextModel, index: int) -> int:
        p = model.probs[index]
        bound = (self.range >> PROB_BITS) * p
        if self.code < bound:
            self.range = bound
            bit = 0
        else:
            self.code -= bound
            self.range -= bound
            bit = 1
        self._charge(_bit_cost(p, bit))
        model.update(index, bit)
        self._normalize()
        return bit

    def decode_bypass(self) -> int:
        self.range >>= 1
        if self.code >= self.range:
            self.code -= self.range
            bit = 1
        else:
            bit = 0
        self._charge(1.0)
        self._normalize()
        return bit

    def decode_bits(self, count: int) -> int:
        value = 0
        for _ in range(count):
            value = (value << 1) | self.decode_bypass()
        return value

    def finish(self) -> None:
        """Check that the whole payload has been consumed."""
        remaining = len(self.data) - self.position
        if remaining:
            raise DecodeError(f"{remaining} trailing bytes after the entropy payload")


class BitCounter(_Ledger):
    """Encoder stand-in that only measures the cost of the coded decisions."""

    def encode_bit(self, model: ContextModel, index: int, bit: int) -> None:
        self._charge(_bit_cost(model.probs[index], bit))
        model.update(index, bit)

    def encode_bypass(self, bit: int) -> None:
        self._charge(1.0)

    def encode_bits(self, value: int, count: int) -> None:
        self._charge(float(count))

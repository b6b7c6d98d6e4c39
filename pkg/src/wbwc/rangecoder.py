"""Carry-propagating range coder and information-content accounting.

The coder keeps a 56-bit ``low``/``range`` window and shifts out one byte
whenever ``range`` drops below 2**48.  Model totals are capped at 2**24, so
``range // total`` never has fewer than 24 significant bits and the rounding
loss stays below 1e-7 bits per symbol.  ``finish`` writes at most one byte:
the smallest byte-aligned value inside the final interval.  Bytes are
written most-significant first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .errors import CorruptBlock, InternalInvariantViolation, TruncatedStream
from .models import MAX_TOTAL, gain_table

TOP_BITS = K.TOP_BITS
TOP = K.TOP
BOT = K.BOT
_MASK = K.MASK
_UNIT = 1 << (TOP_BITS - 8)


def _check(iv, max_total=MAX_TOTAL):
    if not (0 <= iv.low < iv.high <= iv.total <= max_total):
        raise InternalInvariantViolation(f"bad interval {iv}")


class RangeEncoder:
    def __init__(self):
        self.low = 0
        self.range = TOP
        self.out = bytearray()

    def _carry(self):
        j = len(self.out) - 1
        while self.out[j] == 0xFF:
            self.out[j] = 0
            j -= 1
        self.out[j] += 1

    def encode_symbol(self, iv):
        _check(iv)
        r = self.range // iv.total
        self.low += r * iv.low
        self.range = r * iv.width
        if self.low >= TOP:
            self.low -= TOP
            self._carry()
        while self.range < BOT:
            self.out.append(self.low >> (TOP_BITS - 8))
            self.low = (self.low << 8) & _MASK
            self.range <<= 8

    def finish(self):
        if self.range < TOP:
            v = -(-self.low // _UNIT)
            if v >= 256:
                self._carry()
                v -= 256
            self.out.append(v)
            self.range = TOP
        return bytes(self.out)


class RangeDecoder:
    """Mirror of :class:`RangeEncoder`; ``low`` and ``range`` track it exactly."""

    def __init__(self, data):
        self.data = bytes(data)
        self.pos = 0
        self.shifted = 0
        self.low = 0
        self.range = TOP
        self.code = 0
        for _ in range(K.INIT_BYTES):
            self.code = (self.code << 8) | self._next_byte()

    def _next_byte(self):
        if self.pos >= len(self.data) + K.INIT_BYTES:
            raise TruncatedStream("read past the end of the payload")
        b = self.data[self.pos] if self.pos < len(self.data) else 0
        self.pos += 1
        return b

    def decode_symbol(self, total, cum_lookup):
        """Decode one symbol.

        ``cum_lookup(value)`` maps a cumulative value in ``[0, total)`` to
        ``(symbol, SymbolInterval)``.
        """
        r = self.range // total
        value = self.code // r
        if value >= total:
            raise CorruptBlock("code point outside the model's total")
        sym, iv = cum_lookup(value)
        _check(iv)
        self.code -= r * iv.low
        self.low = (self.low + r * iv.low) & _MASK
        self.range = r * iv.width
        while self.range < BOT:
            self.code = (self.code << 8) | self._next_byte()
            self.low = (self.low << 8) & _MASK
            self.range <<= 8
            self.shifted += 1
        return sym

    def verify_end(self):
        """Check the payload ends exactly where the encoder's flush put it."""
        if self.range >= TOP:
            if self.data:
                raise CorruptBlock("trailing bytes after an empty-interval stream")
            return
        v = -(-self.low // _UNIT) * _UNIT
        if len(self.data) < self.shifted + 1:
            raise TruncatedStream("payload shorter than the coded stream")
        if len(self.data) != self.shifted + 1 or self.code != v - self.low:
            raise CorruptBlock("payload length or tail does not match the coded stream")


@dataclass
class IcAccumulator:
    """Sum of -log2(width/total) over coded intervals.

    Besides the float sum it keeps the exact products of widths and totals,
    so two interval sequences can be compared for exact equality of their
    information content.
    """

    keep_trace: bool = False
    exact: bool = False
    total_bits: float = 0.0
    width_product: int = 1
    total_product: int = 1
    per_position: list = field(default_factory=list)

    def add(self, iv):
        bits = math.log2(iv.total) - math.log2(iv.width)
        self.total_bits += bits
        if self.exact:
            self.width_product *= iv.width
            self.total_product *= iv.total
        if self.keep_trace:
            self.per_position.append(bits)
        return bits

    @property
    def exact_bits(self):
        return log2_ratio(self.total_product, self.width_product)


def ideal_ic(iv, acc):
    return acc.add(iv)


def log2_int(x):
    """log2 of a positive integer of any size, accurate to double precision."""
    b = x.bit_length()
    if b <= 1000:
        return math.log2(x)
    shift = b - 64
    return shift + math.log2(x >> shift)


def log2_ratio(num, den):
    return log2_int(num) - log2_int(den)


def product(values):
    """Exact product of integers via a balanced tree."""
    if isinstance(values, np.ndarray) and values.dtype.kind in "iu" and values.size and values.min() >= 0:
        arr = values.astype(np.int64).ravel()
        # pair up in machine words while the partial products cannot overflow
        while arr.size > 1 and 2 * int(arr.max()).bit_length() <= 62:
            if arr.size % 2:
                arr = np.append(arr, 1)
            arr = arr[0::2] * arr[1::2]
        values = arr.tolist()
    vals = [int(v) for v in values]
    if not vals:
        return 1
    while len(vals) > 1:
        nxt = [vals[i] * vals[i + 1] for i in range(0, len(vals) - 1, 2)]
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return vals[0]


@dataclass
class CodedStream:
    payload: bytes
    ideal_bits: float

    @property
    def payload_bits(self):
        return 8 * len(self.payload)

    @property
    def overhead_bits(self):
        return self.payload_bits - self.ideal_bits


def encode_sequence(params, init_w, indices, max_total=MAX_TOTAL):
    """Model + coder over alphabet indices with the compiled loop."""
    idx = np.ascontiguousarray(indices, dtype=np.int64)
    init_w = np.ascontiguousarray(init_w, dtype=np.int64)
    if init_w.sum() > max_total:
        raise InternalInvariantViolation("initial model total exceeds the coder's precision")
    out, bits, status = K.encode(params.method.value, params.k or 1, gain_table(params),
                                 init_w, idx, max_total)
    if status != K.OK:
        raise InternalInvariantViolation("model produced a zero-width or oversized interval")
    return CodedStream(out.tobytes(), bits)


def decode_sequence(params, init_w, payload, n, max_total=MAX_TOTAL):
    buf = np.frombuffer(bytes(payload), dtype=np.uint8)
    syms, status = K.decode(params.method.value, params.k or 1, gain_table(params),
                            np.ascontiguousarray(init_w, dtype=np.int64), buf, int(n), max_total)
    if status == K.TRUNCATED:
        raise TruncatedStream("payload ends before all symbols were decoded")
    if status != K.OK:
        raise CorruptBlock("payload does not decode under the transmitted header")
    return syms

"""Weight models: static, b_adp, f_adp, b_2 and b_weight.

Every model keeps integer weights ``w`` whose ratios define the coding
distribution.  Counting models (static, b_adp, f_adp) use plain occurrence
counts.  The two weighted models keep weights in 16-bit fixed point and,
instead of letting the position weight ``g`` grow without bound, halve every
weight at the end of each block of ``k`` positions.  Because only ratios
matter, halving everything is the same as doubling ``g`` for the next block.

The same arithmetic is compiled in :mod:`wbwc._kernels` for whole sequences;
:class:`WeightModel` is the step-by-step reference used for inspection and
for checking that the compiled path stays in sync.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from enum import Enum
from functools import lru_cache

import numpy as np

from .errors import HeaderMismatch, InvalidParameter, MissingHeader, ZeroProbabilitySymbol

WEIGHT_BITS = 16
WEIGHT_ONE = 1 << WEIGHT_BITS
# coder precision: r = range // total keeps >= 24 bits with a 56-bit window
MAX_TOTAL = 1 << 24


class Method(Enum):
    STATIC = 0
    B_ADP = 1
    F_ADP = 2
    B_2 = 3
    B_WEIGHT = 4

    @property
    def needs_freqs(self):
        return self in (Method.STATIC, Method.F_ADP)

    @property
    def needs_k(self):
        return self in (Method.B_2, Method.B_WEIGHT)

    @property
    def label(self):
        return self.name.lower().replace("_", "-")

    @classmethod
    def parse(cls, name):
        if isinstance(name, cls):
            return name
        key = str(name).strip().upper().replace("-", "_")
        try:
            return cls[key]
        except KeyError:
            raise InvalidParameter(f"unknown method {name!r}") from None


@dataclass(frozen=True)
class MethodParams:
    method: Method
    k: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "method", Method.parse(self.method))
        if self.method.needs_k:
            if self.k is None or int(self.k) < 1:
                raise InvalidParameter(f"{self.method.label} needs k >= 1, got {self.k!r}")
            object.__setattr__(self, "k", int(self.k))
        elif self.k is not None and int(self.k) < 1:
            raise InvalidParameter(f"k must be >= 1, got {self.k!r}")


class AlphabetMode(Enum):
    FIXED256 = "fixed256"
    FILE = "file"


@dataclass(frozen=True)
class Alphabet:
    """Ordered symbol set; ``index`` maps a byte value to its position."""

    mode: AlphabetMode
    symbols: tuple

    def __post_init__(self):
        if not self.symbols:
            raise InvalidParameter("alphabet must hold at least one symbol")
        if list(self.symbols) != sorted(set(self.symbols)):
            raise InvalidParameter("alphabet symbols must be distinct and ascending")

    @classmethod
    def fixed256(cls):
        return cls(AlphabetMode.FIXED256, tuple(range(256)))

    @classmethod
    def from_text(cls, data):
        return cls(AlphabetMode.FILE, tuple(sorted(set(bytes(data)))))

    @classmethod
    def for_mode(cls, mode, data):
        mode = AlphabetMode(mode)
        return cls.fixed256() if mode is AlphabetMode.FIXED256 else cls.from_text(data)

    @property
    def m(self):
        return len(self.symbols)

    def lookup_table(self):
        table = np.full(256, -1, dtype=np.int64)
        table[list(self.symbols)] = np.arange(self.m)
        return table

    def to_indices(self, data):
        idx = self.lookup_table()[np.frombuffer(bytes(data), dtype=np.uint8)]
        if idx.size and idx.min() < 0:
            raise InvalidParameter("text holds a byte outside the alphabet")
        return idx

    def to_bytes(self, indices):
        return np.asarray(self.symbols, dtype=np.uint8)[np.asarray(indices, dtype=np.int64)].tobytes()


@dataclass(frozen=True)
class FrequencyTable:
    """Exact occurrence count per alphabet symbol, in alphabet order."""

    occ: tuple

    @property
    def n(self):
        return sum(self.occ)

    @classmethod
    def from_text(cls, data, alphabet):
        counts = Counter(bytes(data))
        if any(b not in set(alphabet.symbols) for b in counts):
            raise InvalidParameter("text holds a byte outside the alphabet")
        return cls(tuple(counts.get(s, 0) for s in alphabet.symbols))


@dataclass(frozen=True)
class SymbolInterval:
    low: int
    high: int
    total: int

    @property
    def width(self):
        return self.high - self.low

    @property
    def probability(self):
        return self.width / self.total


@lru_cache(maxsize=64)
def _gain_table(k):
    """round(ONE * 2**(j/k)) for j < k, computed in integer/decimal arithmetic.

    Floating-point pow is not guaranteed identical across platforms, and the
    encoder and decoder must agree bit for bit.
    """
    frac = 96
    with localcontext() as ctx:
        ctx.prec = 40
        ratio = Decimal(2) ** (Decimal(1) / Decimal(k))
        step = int((ratio * (1 << frac)).to_integral_value())
    x = 1 << frac
    out = np.empty(k, dtype=np.int64)
    half = 1 << (frac - WEIGHT_BITS - 1)
    for j in range(k):
        out[j] = (x + half) >> (frac - WEIGHT_BITS)
        x = (x * step) >> frac
    out.setflags(write=False)
    return out


def gain_table(params):
    """Per-position increments before any headroom shift.

    Counting models use a unit step, b_2 a constant fixed-point one, b_weight
    the smooth table ``2**((i-1) mod k / k)`` in fixed point.
    """
    method = params.method
    if method is Method.B_2:
        return np.array([WEIGHT_ONE], dtype=np.int64)
    if method is Method.B_WEIGHT:
        return _gain_table(params.k)
    return np.array([1], dtype=np.int64)


def g_value(params, i):
    """Absolute position weight g(i) in fixed point (analysis helper)."""
    params = params if isinstance(params, MethodParams) else MethodParams(params)
    if i < 1:
        raise InvalidParameter("positions are 1-based")
    if params.method is Method.B_2:
        return WEIGHT_ONE << ((i - 1) // params.k)
    if params.method is Method.B_WEIGHT:
        q, r = divmod(i - 1, params.k)
        return int(_gain_table(params.k)[r]) << q
    return WEIGHT_ONE


def initial_weights(params, alphabet, freqs=None):
    method = params.method
    if method.needs_freqs:
        if freqs is None:
            raise MissingHeader(f"{method.label} needs a frequency table")
        if len(freqs.occ) != alphabet.m:
            raise HeaderMismatch("frequency table does not match the alphabet")
        return np.array(freqs.occ, dtype=np.int64)
    unit = WEIGHT_ONE if method.needs_k else 1
    return np.full(alphabet.m, unit, dtype=np.int64)


@dataclass
class WeightModel:
    """Mutable model state: weights, their sum, headroom shift and position."""

    params: MethodParams
    alphabet: Alphabet
    w: list
    total: int
    gains: np.ndarray = field(repr=False)
    shift: int = 0
    pos: int = 1
    max_total: int = MAX_TOTAL

    @property
    def cur_g(self):
        """Increment applied at the current position, in model units."""
        if self.params.method in (Method.STATIC, Method.F_ADP):
            return 0
        return int(self.gains[(self.pos - 1) % len(self.gains)]) >> self.shift

    def symbol_interval(self, sym):
        width = self.w[sym]
        if width <= 0:
            raise ZeroProbabilitySymbol(f"symbol index {sym} has zero weight at position {self.pos}")
        low = sum(self.w[:sym])
        return SymbolInterval(low, low + width, self.total)

    def lookup(self, value):
        """Symbol whose interval holds the cumulative ``value``."""
        low = 0
        for sym, width in enumerate(self.w):
            if value < low + width:
                return sym, SymbolInterval(low, low + width, self.total)
            low += width
        raise ZeroProbabilitySymbol(f"cumulative value {value} beyond total {self.total}")

    def update(self, sym):
        method = self.params.method
        if method is Method.F_ADP:
            if self.w[sym] <= 0:
                raise HeaderMismatch(f"symbol index {sym} exceeds its transmitted count")
            self.w[sym] -= 1
            self.total -= 1
        elif method is not Method.STATIC:
            inc = self.cur_g
            self.w[sym] += inc
            self.total += inc
            if method.needs_k and self.pos % self.params.k == 0:
                self.rescale()
            while self.total > self.max_total:
                self.rescale()
                if int(self.gains[0]) >> (self.shift + 1) >= 1:
                    self.shift += 1
        self.pos += 1

    def rescale(self):
        """Halve every weight, rounding up so no non-zero weight reaches zero."""
        self.w = [(v + 1) >> 1 if v > 0 else 0 for v in self.w]
        self.total = sum(self.w)

    def state(self):
        return tuple(self.w), self.total, self.shift, self.pos


def new_model(params, alphabet, freqs=None, max_total=MAX_TOTAL):
    if not isinstance(params, MethodParams):
        params = MethodParams(params)
    w = initial_weights(params, alphabet, freqs)
    return WeightModel(params, alphabet, [int(v) for v in w], int(w.sum()),
                       gain_table(params), max_total=max_total)

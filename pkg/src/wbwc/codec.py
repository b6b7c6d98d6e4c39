"""End-to-end pipelines: transform, model, range-code, serialize.

Container layout (all multi-bit header fields MSB-first)::

    "WBWC"  version=1  flags  method
    bit-packed header:
        delta(n+1)
        delta(k)               b_2 / b_weight only
        delta(bwt_depth+1)
        delta(block_size+1)    blocked only
        -- the rest only when n > 0 --
        delta(m), m x 8 bits   file alphabet only
        delta(occ+1) per sym   static / f_adp only
        primary indices        ceil(log2 len) bits each
    zero bits to the next byte boundary
    range-coder payload

flags: bit 0 file alphabet, bit 1 BWT applied, bit 2 blocked.  Blocks are
transformed independently and their outputs concatenated; one model codes
the concatenation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from . import _kernels as K
from .bwt import BwtBlock, IteratedBwt, bwt_blocks, bwt_inverse, bwt_inverse_iterated, bwt_iterate, split_blocks
from .elias import BitReader, BitWriter, elias_delta_length, read_elias_delta, write_elias_delta
from .errors import (ConfigError, CorruptBlock, CorruptHeader, EmptyText, HeaderMismatch,
                     InvalidParameter, InvarianceViolation)
from .models import (MAX_TOTAL, Alphabet, AlphabetMode, FrequencyTable, Method, MethodParams,
                     gain_table, initial_weights)
from .rangecoder import decode_sequence, encode_sequence, log2_int, log2_ratio, product

MAGIC = b"WBWC"
VERSION = 1
FLAG_FILE_ALPHABET = 0x01
FLAG_BWT = 0x02
FLAG_BLOCKED = 0x04
PREFIX_LEN = len(MAGIC) + 3
MAX_N = 1 << 34


class HeaderEstimateMode(Enum):
    IC_LOWER_BOUND = "ic"
    ELIAS_DELTA = "elias"


@dataclass(frozen=True)
class CodecConfig:
    method: Method
    k: Optional[int] = None
    use_bwt: bool = False
    bwt_depth: Optional[int] = None
    block_size: Optional[int] = None
    alphabet_mode: AlphabetMode = AlphabetMode.FIXED256

    def __post_init__(self):
        set_ = lambda name, v: object.__setattr__(self, name, v)  # noqa: E731
        try:
            params = MethodParams(self.method, self.k)
            set_("alphabet_mode", AlphabetMode(self.alphabet_mode))
        except (InvalidParameter, ValueError) as exc:
            raise ConfigError(str(exc)) from None
        set_("method", params.method)
        set_("k", params.k if params.method.needs_k else None)
        depth = self.bwt_depth
        if depth is None:
            depth = 1 if (self.use_bwt or self.block_size) else 0
        if depth < 0:
            raise ConfigError("bwt_depth must be >= 0")
        if depth >= 1 and not self.use_bwt and self.bwt_depth is not None:
            raise ConfigError("bwt_depth >= 1 requires use_bwt")
        set_("use_bwt", depth >= 1)
        set_("bwt_depth", depth)
        if self.block_size is not None:
            if self.block_size < 1:
                raise ConfigError("block_size must be >= 1")
            if depth != 1:
                raise ConfigError("block_size requires bwt_depth == 1")

    @property
    def params(self):
        return MethodParams(self.method, self.k)

    @property
    def blocked(self):
        return self.block_size is not None


@dataclass
class IcReport:
    net_bits: float
    header_bits: float
    n: int
    ic_trace: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def avg_bps(self):
        return self.net_bits / self.n

    @property
    def total_bps(self):
        return (self.net_bits + self.header_bits) / self.n

    @property
    def per_position(self):
        if self.ic_trace is None:
            return None
        return [(i + 1, float(v)) for i, v in enumerate(self.ic_trace)]


@dataclass(frozen=True)
class Container:
    """A serialized compressed text plus bookkeeping for reports."""

    data: bytes
    config: CodecConfig
    n: int
    payload_len: int
    ideal_bits: float = 0.0
    ideal_header_bits: float = 0.0  # IC-bound frequency header plus log2 of each index range

    def __bytes__(self):
        return self.data

    def __len__(self):
        return len(self.data)

    @property
    def header_len(self):
        return len(self.data) - self.payload_len

    @property
    def ideal_total_bps(self):
        return (self.ideal_bits + self.ideal_header_bits) / self.n if self.n else 0.0


# -- headers -----------------------------------------------------------------

def _write_alphabet(w, alphabet):
    write_elias_delta(w, alphabet.m)
    for s in alphabet.symbols:
        w.write(s, 8)


def _read_alphabet(r):
    m = read_elias_delta(r)
    if m > 256:
        raise CorruptHeader(f"alphabet of {m} symbols")
    symbols = tuple(r.read(8) for _ in range(m))
    try:
        return Alphabet(AlphabetMode.FILE, symbols)
    except InvalidParameter as exc:
        raise CorruptHeader(str(exc)) from None


def _write_counts(w, freqs):
    for c in freqs.occ:
        write_elias_delta(w, c + 1)


def _read_counts(r, m):
    return FrequencyTable(tuple(read_elias_delta(r) - 1 for _ in range(m)))


def freq_header_encode(freqs, alphabet):
    """Alphabet mode bit, the alphabet itself in file mode, then delta(occ+1) each."""
    if len(freqs.occ) != alphabet.m:
        raise InvalidParameter("frequency table does not match the alphabet")
    w = BitWriter()
    file_mode = alphabet.mode is AlphabetMode.FILE
    w.write(int(file_mode), 1)
    if file_mode:
        _write_alphabet(w, alphabet)
    _write_counts(w, freqs)
    return w


def freq_header_decode(data, nbits=None):
    """Inverse of :func:`freq_header_encode`; returns (FrequencyTable, Alphabet)."""
    if isinstance(data, BitWriter):
        nbits, data = data.nbits, data.to_bytes()
    r = BitReader(data)
    if nbits is not None:
        r.limit = nbits
    alphabet = _read_alphabet(r) if r.read(1) else Alphabet.fixed256()
    return _read_counts(r, alphabet.m), alphabet


def freq_header_bits(freqs, alphabet):
    bits = sum(elias_delta_length(c + 1) for c in freqs.occ)
    if alphabet.mode is AlphabetMode.FILE:
        bits += elias_delta_length(alphabet.m) + 8 * alphabet.m
    return bits


def ic_header_lower_bound(n, m):
    """log2 C(n+m-1, n): bits to name one count vector of m counts summing to n."""
    if n < 0 or m < 1:
        raise InvalidParameter("need n >= 0 and m >= 1")
    return log2_int(math.comb(n + m - 1, n))


def _index_width(length):
    return (length - 1).bit_length()


# -- transform ---------------------------------------------------------------

def _transform(data, cfg):
    """Returns (transformed, [(primary_index, length), ...])."""
    if cfg.blocked:
        blocks = bwt_blocks(data, cfg.block_size)
        return b"".join(b.data for b in blocks), [(b.primary_index, len(b)) for b in blocks]
    if cfg.bwt_depth:
        it = bwt_iterate(data, cfg.bwt_depth)
        return it.data, [(p, len(data)) for p in it.indices]
    return bytes(data), []


def _untransform(data, cfg, indices):
    if cfg.blocked:
        spans = split_blocks(len(data), cfg.block_size)
        return b"".join(bwt_inverse(BwtBlock(data[s:e], p)) for (s, e), p in zip(spans, indices))
    if cfg.bwt_depth:
        return bwt_inverse_iterated(IteratedBwt(data, tuple(indices)))
    return data


def _check_size(n, method):
    if method.needs_freqs and n > MAX_TOTAL:
        raise InvalidParameter(f"{method.label} codes at most {MAX_TOTAL} symbols per stream")


# -- compress / decompress ---------------------------------------------------

def compress(t, cfg):
    data = bytes(t)
    n = len(data)
    method = cfg.method
    _check_size(n, method)
    flags = ((FLAG_FILE_ALPHABET if cfg.alphabet_mode is AlphabetMode.FILE else 0)
             | (FLAG_BWT if cfg.use_bwt else 0) | (FLAG_BLOCKED if cfg.blocked else 0))
    w = BitWriter()
    write_elias_delta(w, n + 1)
    if method.needs_k:
        write_elias_delta(w, cfg.k)
    write_elias_delta(w, cfg.bwt_depth + 1)
    if cfg.blocked:
        write_elias_delta(w, cfg.block_size + 1)
    payload, ideal, ideal_header = b"", 0.0, 0.0
    if n:
        transformed, indices = _transform(data, cfg)
        alphabet = Alphabet.for_mode(cfg.alphabet_mode, transformed)
        freqs = FrequencyTable.from_text(transformed, alphabet) if method.needs_freqs else None
        if alphabet.mode is AlphabetMode.FILE:
            _write_alphabet(w, alphabet)
        if freqs is not None:
            _write_counts(w, freqs)
        for p, length in indices:
            w.write(p, _index_width(length))
        stream = encode_sequence(cfg.params, initial_weights(cfg.params, alphabet, freqs),
                                 alphabet.to_indices(transformed))
        payload, ideal = stream.payload, stream.ideal_bits
        ideal_header = sum(math.log2(length) for _, length in indices)
        if freqs is not None:
            ideal_header += ic_header_lower_bound(n, alphabet.m)
    head = MAGIC + bytes([VERSION, flags, method.value]) + w.to_bytes()
    return Container(head + payload, cfg, n, len(payload), ideal, ideal_header)


def read_config(data):
    """Parse the fixed prefix and the header; returns (cfg, n, reader)."""
    data = bytes(data)
    if len(data) < PREFIX_LEN or data[:4] != MAGIC:
        raise CorruptHeader("not a WBWC container")
    version, flags, method_id = data[4], data[5], data[6]
    if version != VERSION:
        raise CorruptHeader(f"unsupported container version {version}")
    if flags & ~(FLAG_FILE_ALPHABET | FLAG_BWT | FLAG_BLOCKED):
        raise CorruptHeader(f"unknown flag bits {flags:#x}")
    try:
        method = Method(method_id)
    except ValueError:
        raise CorruptHeader(f"unknown method id {method_id}") from None
    r = BitReader(data, PREFIX_LEN)
    n = read_elias_delta(r) - 1
    if n > MAX_N:
        raise CorruptHeader(f"implausible text length {n}")
    k = read_elias_delta(r) if method.needs_k else None
    depth = read_elias_delta(r) - 1
    block_size = read_elias_delta(r) - 1 if flags & FLAG_BLOCKED else None
    if bool(flags & FLAG_BWT) != (depth >= 1):
        raise CorruptHeader("BWT flag disagrees with the transform depth")
    try:
        cfg = CodecConfig(method, k, use_bwt=depth >= 1, bwt_depth=depth, block_size=block_size,
                          alphabet_mode=(AlphabetMode.FILE if flags & FLAG_FILE_ALPHABET
                                         else AlphabetMode.FIXED256))
    except ConfigError as exc:
        raise CorruptHeader(str(exc)) from None
    return cfg, n, r


def _check_padding(r):
    if r.read(-r.pos % 8):
        raise CorruptHeader("non-zero padding after the header")


def decompress(c):
    data = bytes(c)
    cfg, n, r = read_config(data)
    if n == 0:
        _check_padding(r)
        if r.align() != len(data):
            raise CorruptBlock("bytes after an empty container's header")
        return b""
    method = cfg.method
    alphabet = _read_alphabet(r) if cfg.alphabet_mode is AlphabetMode.FILE else Alphabet.fixed256()
    freqs = _read_counts(r, alphabet.m) if method.needs_freqs else None
    if freqs is not None:
        if freqs.n != n:
            raise CorruptHeader("frequency header does not sum to the text length")
        if n > MAX_TOTAL:
            raise CorruptHeader("frequency header exceeds the coder's precision")
    if cfg.blocked:
        lengths = [e - s for s, e in split_blocks(n, cfg.block_size)]
    else:
        lengths = [n] * cfg.bwt_depth
    indices = [r.read(_index_width(length)) for length in lengths]
    _check_padding(r)
    params = cfg.params
    try:
        syms = decode_sequence(params, initial_weights(params, alphabet, freqs), data[r.align():], n)
    except MemoryError:
        raise CorruptHeader(f"cannot hold {n} decoded symbols") from None
    if freqs is not None:
        got = np.bincount(syms, minlength=alphabet.m)
        if tuple(int(v) for v in got) != freqs.occ:
            raise HeaderMismatch("decoded symbols disagree with the frequency header")
    return _untransform(alphabet.to_bytes(syms), cfg, indices)


# -- analysis ----------------------------------------------------------------

def _model_inputs(t, cfg):
    data = bytes(t)
    if not data:
        raise EmptyText("analysis needs a non-empty text")
    _check_size(len(data), cfg.method)
    transformed, indices = _transform(data, cfg)
    alphabet = Alphabet.for_mode(cfg.alphabet_mode, transformed)
    freqs = FrequencyTable.from_text(transformed, alphabet) if cfg.method.needs_freqs else None
    return transformed, indices, alphabet, freqs


def _trace(params, alphabet, freqs, transformed, trace):
    bits, status, ic, lows, widths, totals = K.model_trace(
        params.method.value, params.k or 1, gain_table(params),
        initial_weights(params, alphabet, freqs), alphabet.to_indices(transformed), MAX_TOTAL, trace)
    if status != K.OK:
        raise HeaderMismatch("a symbol has zero weight under the frequency table")
    return bits, ic, widths, totals


def analyze(t, cfg, header_mode=HeaderEstimateMode.IC_LOWER_BOUND, trace=False):
    """Ideal information content of coding ``t`` under ``cfg``.

    The frequency header is estimated as log2 C(n+m-1, n) in ``ic`` mode or
    counted as real Elias delta bits in ``elias`` mode.  Each BWT primary
    index costs log2 of its block length.
    """
    header_mode = HeaderEstimateMode(header_mode)
    transformed, indices, alphabet, freqs = _model_inputs(t, cfg)
    n = len(transformed)
    bits, ic, _, _ = _trace(cfg.params, alphabet, freqs, transformed, trace)
    header = 0.0
    if freqs is not None:
        header = (ic_header_lower_bound(n, alphabet.m) if header_mode is HeaderEstimateMode.IC_LOWER_BOUND
                  else float(freq_header_bits(freqs, alphabet)))
    header += sum(math.log2(length) for _, length in indices)
    return IcReport(bits, header, n, ic if trace else None)


def _interval_arrays(params, init_w, syms):
    _, status, _, _, widths, totals = K.model_trace(
        params.method.value, params.k or 1, gain_table(params), init_w, syms, MAX_TOTAL, True)
    if status != K.OK:
        raise HeaderMismatch("a symbol has zero weight under the frequency table")
    return totals, widths


def _exact_products(params, init_w, syms):
    totals, widths = _interval_arrays(params, init_w, syms)
    return product(totals), product(widths)


def exact_ic(t, cfg):
    """(product of totals, product of widths) over the coded interval sequence."""
    transformed, _, alphabet, freqs = _model_inputs(t, cfg)
    return _exact_products(cfg.params, initial_weights(cfg.params, alphabet, freqs),
                           alphabet.to_indices(transformed))


@dataclass
class InvarianceReport:
    method: Method
    trials: int
    net_bits: float
    exact: tuple
    payload_bits: list

    @property
    def payload_spread(self):
        return max(self.payload_bits) - min(self.payload_bits)


def verify_invariance(t, method, trials, alphabet_mode=AlphabetMode.FIXED256, seed=None,
                      max_spread=64):
    """Check that random permutations of ``t`` leave the coded size unchanged.

    Exact information content (as a ratio of integer products) must match
    for every permutation; real payload sizes may differ by the coder's
    tail only, at most ``max_spread`` bits.
    """
    method = Method.parse(method)
    if method not in (Method.STATIC, Method.B_ADP, Method.F_ADP):
        raise InvalidParameter(f"{method.label} is not permutation invariant")
    data = bytes(t)
    cfg = CodecConfig(method, alphabet_mode=alphabet_mode)
    rng = np.random.default_rng(seed)
    _, _, alphabet, freqs = _model_inputs(data, cfg)
    init_w = initial_weights(cfg.params, alphabet, freqs)
    syms = alphabet.to_indices(data)
    ref_totals, ref_widths = (np.sort(a) for a in _interval_arrays(cfg.params, init_w, syms))
    reference = product(ref_totals), product(ref_widths)
    sizes = []
    for trial in range(trials + 1):
        perm = np.arange(syms.size) if trial == 0 else rng.permutation(syms.size)
        permuted = np.ascontiguousarray(syms[perm])
        totals, widths = _interval_arrays(cfg.params, init_w, permuted)
        # equal multisets give equal products; otherwise compare the products themselves
        same = (np.array_equal(np.sort(totals), ref_totals) and np.array_equal(np.sort(widths), ref_widths)
                or (product(totals), product(widths)) == reference)
        if not same:
            raise InvarianceViolation(f"{method.label}: exact IC changed under a permutation", perm)
        stream = encode_sequence(cfg.params, init_w, permuted)
        sizes.append(8 * len(stream.payload))
        if max(sizes) - min(sizes) > max_spread:
            raise InvarianceViolation(f"{method.label}: payload sizes differ by more than "
                                      f"{max_spread} bits", perm)
    return InvarianceReport(method, trials, log2_ratio(*reference), reference, sizes)


def verify_gap(n, m, t):
    """b_adp minus f_adp net bits; asserts it equals log2 C(m+n-1, n) exactly."""
    data = bytes(t)
    if len(data) != n:
        raise InvalidParameter(f"text has {len(data)} symbols, expected {n}")
    mode = AlphabetMode.FIXED256 if m == 256 else AlphabetMode.FILE
    if mode is AlphabetMode.FILE and len(set(data)) != m:
        raise InvalidParameter(f"text uses {len(set(data))} distinct symbols, expected m={m}")
    tb, wb = exact_ic(data, CodecConfig(Method.B_ADP, alphabet_mode=mode))
    tf, wf = exact_ic(data, CodecConfig(Method.F_ADP, alphabet_mode=mode))
    binom = math.comb(m + n - 1, n)
    # (tb/wb) / (tf/wf) == binom, cross-multiplied
    if tb * wf != binom * wb * tf:
        raise InvarianceViolation("b_adp - f_adp gap differs from log2 C(m+n-1, n)")
    return log2_ratio(tb, wb) - log2_ratio(tf, wf)


def frequency_table(t, alphabet_mode=AlphabetMode.FIXED256):
    data = bytes(t)
    alphabet = Alphabet.for_mode(alphabet_mode, data) if data else Alphabet.fixed256()
    return FrequencyTable.from_text(data, alphabet), alphabet

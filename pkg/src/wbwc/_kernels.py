"""Compiled inner loops: fused model + range coder, and the inverse-BWT walk.

The arithmetic here is the same integer arithmetic as ``models.WeightModel``
and ``rangecoder.RangeEncoder``/``RangeDecoder``; the test-suite checks the two
paths against each other symbol by symbol.
"""

import math

import numpy as np
from numba import njit

STATIC, B_ADP, F_ADP, B_2, B_WEIGHT = 0, 1, 2, 3, 4

# range coder window: 56-bit low/range, one byte shifted per renormalization
TOP_BITS = 56
TOP = 1 << TOP_BITS
BOT = 1 << (TOP_BITS - 8)
MASK = TOP - 1
INIT_BYTES = TOP_BITS // 8

OK, TRUNCATED, CORRUPT = 0, 1, 2


@njit(cache=True, nogil=True)
def _fen_build(w, fen):
    m = w.size
    fen[0] = 0
    for i in range(m):
        fen[i + 1] = w[i]
    for i in range(1, m + 1):
        j = i + (i & -i)
        if j <= m:
            fen[j] += fen[i]


@njit(cache=True, nogil=True)
def _fen_prefix(fen, sym):
    s = 0
    i = sym
    while i > 0:
        s += fen[i]
        i -= i & -i
    return s


@njit(cache=True, nogil=True)
def _fen_add(fen, sym, delta):
    m = fen.size - 1
    i = sym + 1
    while i <= m:
        fen[i] += delta
        i += i & -i


@njit(cache=True, nogil=True)
def _fen_find(fen, value):
    # largest sym with prefix(sym) <= value; returns (sym, prefix(sym))
    m = fen.size - 1
    step = 1
    while step * 2 <= m:
        step *= 2
    pos = 0
    rem = value
    while step > 0:
        nxt = pos + step
        if nxt <= m and fen[nxt] <= rem:
            pos = nxt
            rem -= fen[nxt]
        step //= 2
    return pos, value - rem


@njit(cache=True, nogil=True)
def _halve(w, fen):
    total = 0
    for i in range(w.size):
        v = w[i]
        if v > 0:
            v = (v + 1) >> 1
            w[i] = v
        total += v
    _fen_build(w, fen)
    return total


@njit(cache=True, nogil=True)
def _update(method, k, gtab, w, fen, st, sym, max_total):
    # st = [total, shift, pos]
    total = st[0]
    shift = st[1]
    pos = st[2]
    if method == F_ADP:
        w[sym] -= 1
        _fen_add(fen, sym, -1)
        total -= 1
    elif method != STATIC:
        inc = gtab[(pos - 1) % gtab.size] >> shift
        w[sym] += inc
        _fen_add(fen, sym, inc)
        total += inc
        if (method == B_2 or method == B_WEIGHT) and pos % k == 0:
            total = _halve(w, fen)
        while total > max_total:
            total = _halve(w, fen)
            if (gtab[0] >> (shift + 1)) >= 1:
                shift += 1
    st[0] = total
    st[1] = shift
    st[2] = pos + 1


@njit(cache=True, nogil=True)
def model_trace(method, k, gtab, init_w, syms, max_total, trace):
    """Run the model over ``syms``; return IC bits and, if asked, per-step data.

    Returns (bits, status, ic, cum_lows, widths, totals).  status is CORRUPT
    when a symbol with zero weight is met (wrong header for static/f_adp).
    """
    n = syms.size
    m = init_w.size
    w = init_w.copy()
    fen = np.zeros(m + 1, np.int64)
    _fen_build(w, fen)
    st = np.zeros(3, np.int64)
    st[0] = w.sum()
    st[2] = 1
    cnt = n if trace else 0
    ic = np.zeros(cnt, np.float64)
    lows = np.zeros(cnt, np.int64)
    widths = np.zeros(cnt, np.int64)
    totals = np.zeros(cnt, np.int64)
    bits = 0.0
    for i in range(n):
        s = syms[i]
        wd = w[s]
        if wd <= 0:
            return bits, CORRUPT, ic, lows, widths, totals
        total = st[0]
        v = math.log2(total) - math.log2(wd)
        bits += v
        if trace:
            ic[i] = v
            lows[i] = _fen_prefix(fen, s)
            widths[i] = wd
            totals[i] = total
        _update(method, k, gtab, w, fen, st, s, max_total)
    return bits, OK, ic, lows, widths, totals


@njit(cache=True, nogil=True)
def _carry(out, nout):
    j = nout - 1
    while j >= 0:
        if out[j] == 255:
            out[j] = 0
            j -= 1
        else:
            out[j] += 1
            return


@njit(cache=True, nogil=True)
def _emit(out, nout, byte):
    if nout >= out.size:
        bigger = np.zeros(out.size * 2 + 16, np.uint8)
        bigger[:nout] = out[:nout]
        out = bigger
    out[nout] = byte
    return out


@njit(cache=True, nogil=True)
def encode(method, k, gtab, init_w, syms, max_total):
    """Model + range coder over ``syms``.

    Returns (payload, ideal_bits, status).
    """
    n = syms.size
    m = init_w.size
    w = init_w.copy()
    fen = np.zeros(m + 1, np.int64)
    _fen_build(w, fen)
    st = np.zeros(3, np.int64)
    st[0] = w.sum()
    st[2] = 1
    out = np.zeros(n // 2 + 64, np.uint8)
    nout = 0
    low = 0
    rng = TOP
    bits = 0.0
    for i in range(n):
        s = syms[i]
        wd = w[s]
        total = st[0]
        if wd <= 0 or total > max_total:
            return out[:0], bits, CORRUPT
        bits += math.log2(total) - math.log2(wd)
        r = rng // total
        low += r * _fen_prefix(fen, s)
        rng = r * wd
        if low >= TOP:
            low -= TOP
            _carry(out, nout)
        while rng < BOT:
            out = _emit(out, nout, low >> (TOP_BITS - 8))
            nout += 1
            low = (low << 8) & MASK
            rng <<= 8
        _update(method, k, gtab, w, fen, st, s, max_total)
    if rng < TOP:
        unit = 1 << (TOP_BITS - 8)
        v = (low + unit - 1) // unit
        if v >= 256:
            _carry(out, nout)
            v -= 256
        out = _emit(out, nout, v)
        nout += 1
    return out[:nout].copy(), bits, OK


@njit(cache=True, nogil=True)
def decode(method, k, gtab, init_w, payload, n, max_total):
    """Inverse of :func:`encode`.  Returns (syms, status)."""
    m = init_w.size
    w = init_w.copy()
    fen = np.zeros(m + 1, np.int64)
    _fen_build(w, fen)
    st = np.zeros(3, np.int64)
    st[0] = w.sum()
    st[2] = 1
    syms = np.zeros(n, np.int64)
    size = payload.size
    code = 0
    for j in range(INIT_BYTES):
        code <<= 8
        if j < size:
            code |= payload[j]
    inpos = INIT_BYTES
    low = 0
    rng = TOP
    shifted = 0
    for i in range(n):
        total = st[0]
        if total <= 0 or total > max_total:
            return syms, CORRUPT
        r = rng // total
        value = code // r
        if value >= total:
            return syms, CORRUPT
        s, cl = _fen_find(fen, value)
        if s >= m:
            return syms, CORRUPT
        wd = w[s]
        code -= r * cl
        low = (low + r * cl) & MASK
        rng = r * wd
        while rng < BOT:
            if inpos >= size + INIT_BYTES:
                return syms, TRUNCATED
            b = payload[inpos] if inpos < size else 0
            inpos += 1
            code = (code << 8) | b
            low = (low << 8) & MASK
            rng <<= 8
            shifted += 1
        syms[i] = s
        _update(method, k, gtab, w, fen, st, s, max_total)
    if rng >= TOP:
        if size != 0:
            return syms, CORRUPT
    else:
        unit = 1 << (TOP_BITS - 8)
        v = (low + unit - 1) // unit * unit
        if size < shifted + 1:
            return syms, TRUNCATED
        if size != shifted + 1 or code != v - low:
            return syms, CORRUPT
    return syms, OK


@njit(cache=True, nogil=True)
def lf_walk(last, lf, primary):
    n = last.size
    out = np.empty(n, np.uint8)
    j = primary
    for i in range(n - 1, -1, -1):
        out[i] = last[j]
        j = lf[j]
    return out

"""MSB-first bit streams and the Elias delta code."""

from __future__ import annotations

from .errors import CorruptHeader, InvalidParameter


class BitWriter:
    def __init__(self):
        self._buf = bytearray()
        self._acc = 0
        self._pending = 0  # bits held in _acc, below 8 between writes
        self.nbits = 0

    def write(self, value, width):
        if width < 0 or value < 0 or value >> width:
            raise InvalidParameter(f"{value} does not fit in {width} bits")
        self._acc = (self._acc << width) | value
        self._pending += width
        self.nbits += width
        whole = self._pending >> 3
        if whole:
            self._pending &= 7
            self._buf += (self._acc >> self._pending).to_bytes(whole, "big")
            self._acc &= (1 << self._pending) - 1

    def write_bits(self, bits):
        for ch in bits:
            self.write(1 if ch in (1, "1") else 0, 1)

    def to_bytes(self):
        """Pad with zero bits to a byte boundary."""
        if not self._pending:
            return bytes(self._buf)
        return bytes(self._buf) + bytes([self._acc << (8 - self._pending)])

    def bitstring(self):
        data = self.to_bytes()
        if not data:
            return ""
        return format(int.from_bytes(data, "big"), f"0{8 * len(data)}b")[:self.nbits]


class BitReader:
    def __init__(self, data, start=0):
        self.data = bytes(data)
        self.pos = start * 8
        self.limit = len(self.data) * 8

    def read(self, width):
        if width == 0:
            return 0
        if self.pos + width > self.limit:
            raise CorruptHeader("header runs past the end of the container")
        first, last = self.pos // 8, (self.pos + width - 1) // 8
        chunk = int.from_bytes(self.data[first:last + 1], "big")
        drop = (last + 1) * 8 - (self.pos + width)
        self.pos += width
        return (chunk >> drop) & ((1 << width) - 1)

    def align(self):
        """Byte offset of the next whole byte."""
        return -(-self.pos // 8)


def elias_delta_length(v):
    if v < 1:
        raise InvalidParameter("Elias delta codes positive integers only")
    n = v.bit_length()
    return 2 * (n.bit_length() - 1) + n


def write_elias_delta(w, v):
    if v < 1:
        raise InvalidParameter("Elias delta codes positive integers only")
    n = v.bit_length()
    nn = n.bit_length()
    w.write(0, nn - 1)
    w.write(n, nn)
    w.write(v - (1 << (n - 1)), n - 1)


def read_elias_delta(r):
    zeros = 0
    while r.read(1) == 0:
        zeros += 1
        if zeros > 32:
            raise CorruptHeader("Elias delta prefix too long")
    n = (1 << zeros) | r.read(zeros)
    return (1 << (n - 1)) | r.read(n - 1)


def elias_delta_encode(v):
    """Codeword for ``v`` as a '0'/'1' string."""
    w = BitWriter()
    write_elias_delta(w, v)
    return w.bitstring()


def elias_delta_decode(bits):
    s = "".join(str(b) for b in bits) if not isinstance(bits, str) else bits
    if not s or set(s) - {"0", "1"}:
        raise CorruptHeader("not a bit string")
    w = BitWriter()
    w.write_bits(s)
    r = BitReader(w.to_bytes())
    r.limit = len(s)
    v = read_elias_delta(r)
    if r.pos != len(s):
        raise CorruptHeader("trailing bits after the codeword")
    return v

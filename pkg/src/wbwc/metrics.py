"""Run structure, NNR and order-0 entropy of a text, plus IC trace export."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import EmptyText, InvalidParameter


def _nonempty(t):
    a = np.frombuffer(bytes(t), dtype=np.uint8)
    if a.size == 0:
        raise EmptyText("measurement needs a non-empty text")
    return a


def _run_starts(a):
    starts = np.ones(a.size, dtype=bool)
    starts[1:] = a[1:] != a[:-1]
    return np.flatnonzero(starts)


@dataclass(frozen=True)
class RunDecomposition:
    runs: tuple  # (symbol, length) pairs in text order

    @property
    def count(self):
        return len(self.runs)

    @property
    def lengths(self):
        return [length for _, length in self.runs]


@dataclass(frozen=True)
class NnrValue:
    value: Fraction

    def __float__(self):
        return float(self.value)

    def __eq__(self, other):
        if isinstance(other, NnrValue):
            return self.value == other.value
        if isinstance(other, float):
            return float(self.value) == other  # 0.4 means the nearest double, not 3602879701896397/2**53
        if isinstance(other, (int, Fraction)):
            return self.value == other
        return NotImplemented

    def __lt__(self, other):
        return self.value < (other.value if isinstance(other, NnrValue) else other)

    def __hash__(self):
        return hash(self.value)


def run_decompose(t):
    a = _nonempty(t)
    starts = _run_starts(a)
    lengths = np.diff(np.append(starts, a.size))
    return RunDecomposition(tuple((int(a[s]), int(n)) for s, n in zip(starts, lengths)))


def run_count(t):
    return int(_run_starts(_nonempty(t)).size)


def nnr(t):
    a = _nonempty(t)
    return NnrValue(Fraction(int(_run_starts(a).size), int(a.size)))


def entropy0(t):
    a = _nonempty(t)
    counts = np.bincount(a, minlength=256)
    counts = counts[counts > 0]
    n = a.size
    # sum occ*log2(n/occ) / n; same summation order as the static model trace
    return float(sum(int(c) * (math.log2(n) - math.log2(int(c))) for c in counts) / n)


def ic_trace_export(report, sink):
    """Write ``index,ic_bits,cumulative_bits`` rows to a path or text stream."""
    if report.ic_trace is None:
        raise InvalidParameter("report has no per-position trace; analyze with trace=True")
    if isinstance(sink, (str, bytes)) or hasattr(sink, "__fspath__"):
        with open(sink, "w", newline="") as fh:
            _write_trace(report.ic_trace, fh)
    else:
        _write_trace(report.ic_trace, sink)


def _write_trace(ic, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["index", "ic_bits", "cumulative_bits"])
    cum = 0.0
    for i, v in enumerate(ic, 1):
        cum += float(v)
        w.writerow([i, f"{float(v):.6f}", f"{cum:.6f}"])

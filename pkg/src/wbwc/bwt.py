"""Burrows-Wheeler transform over cyclic rotations (no sentinel symbol).

The primary index is the rank of the unrotated text among the sorted
rotations (the bzip2 convention).  Equal rotations, which only occur for
periodic texts, are ordered by ascending start index.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .errors import CorruptBlock, EmptyText, InvalidParameter


@dataclass(frozen=True)
class BwtBlock:
    data: bytes
    primary_index: int

    def __len__(self):
        return len(self.data)


@dataclass(frozen=True)
class IteratedBwt:
    data: bytes
    indices: tuple = field(default_factory=tuple)

    @property
    def depth(self):
        return len(self.indices)


def _as_array(t):
    if isinstance(t, np.ndarray):
        return np.ascontiguousarray(t, dtype=np.uint8)
    return np.frombuffer(bytes(t), dtype=np.uint8)


_SEED = 4  # bytes packed into the first sort key


def _group_heads(starts):
    """Forward-fill each position with the index of its group's first slot."""
    heads = np.where(starts, np.arange(starts.size), 0)
    return np.maximum.accumulate(heads)


def rotation_sort(t):
    """Start indices of the cyclic rotations of ``t`` in sorted order.

    Prefix doubling in the style of Larsson-Sadakane: a rotation's rank is
    the first slot of its group in the current order, and each round only
    re-sorts groups that still hold more than one rotation.  After the
    round with step ``h`` the groups agree on the first ``2h`` symbols.
    """
    a = _as_array(t)
    n = a.size
    if n == 0:
        raise EmptyText("cannot sort the rotations of an empty text")
    keys = np.zeros(n, dtype=np.int64)
    for j in range(_SEED):
        keys = (keys << 8) | np.roll(a, -j)
    order = np.argsort(keys, kind="stable")
    ks = keys[order]
    starts = np.ones(n, dtype=bool)
    starts[1:] = ks[1:] != ks[:-1]
    ranks = np.empty(n, dtype=np.int64)
    ranks[order] = _group_heads(starts)
    active = np.flatnonzero(_in_multi_group(starts))
    h = _SEED
    while active.size and h < n:
        items = order[active]
        g = ranks[items]
        second = ranks[(items + h) % n]
        sub = np.lexsort((second, g))
        items = items[sub]
        g, second = g[sub], second[sub]
        order[active] = items
        starts = np.ones(active.size, dtype=bool)
        starts[1:] = (g[1:] != g[:-1]) | (second[1:] != second[:-1])
        ranks[items] = active[_group_heads(starts)]
        active = active[_in_multi_group(starts)]
        h *= 2
    return order


def _in_multi_group(starts):
    gid = np.cumsum(starts) - 1
    return np.bincount(gid)[gid] > 1


def bwt_forward(t):
    a = _as_array(t)
    order = rotation_sort(a)
    last = a[order - 1]  # order - 1 == -1 wraps to the final symbol
    primary = int(np.flatnonzero(order == 0)[0])
    return BwtBlock(last.tobytes(), primary)


def lf_mapping(last):
    """LF[j]: row of the rotation that starts one position before row j's."""
    order = np.argsort(last, kind="stable")
    lf = np.empty(last.size, dtype=np.int64)
    lf[order] = np.arange(last.size, dtype=np.int64)
    return lf


def bwt_inverse(block):
    last = _as_array(block.data)
    n = last.size
    if n == 0:
        raise EmptyText("an empty block has no inverse")
    p = block.primary_index
    if not isinstance(p, (int, np.integer)) or not 0 <= p < n:
        raise CorruptBlock(f"primary index {p!r} outside [0, {n})")
    return K.lf_walk(last, lf_mapping(last), int(p)).tobytes()


def bwt_iterate(t, depth):
    if depth < 0:
        raise InvalidParameter("depth must be >= 0")
    data = bytes(t)
    if depth and not data:
        raise EmptyText("cannot transform an empty text")
    indices = []
    for _ in range(depth):
        block = bwt_forward(data)
        data = block.data
        indices.append(block.primary_index)
    return IteratedBwt(data, tuple(indices))


def bwt_inverse_iterated(b):
    data = b.data
    for p in reversed(b.indices):
        data = bwt_inverse(BwtBlock(data, p))
    return bytes(data)


def split_blocks(n, block_size):
    if block_size < 1:
        raise InvalidParameter("block_size must be >= 1")
    return [(s, min(s + block_size, n)) for s in range(0, n, block_size)]


def bwt_blocks(t, block_size, workers=None):
    """Transform consecutive chunks of ``block_size`` bytes independently.

    With ``workers`` > 1 the chunks are sorted on a thread pool; the result
    is identical to the sequential order.
    """
    data = bytes(t)
    spans = split_blocks(len(data), block_size)
    chunks = [data[s:e] for s, e in spans]
    if workers and workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(bwt_forward, chunks))
    return [bwt_forward(c) for c in chunks]


def bwt_inverse_blocks(blocks):
    return b"".join(bwt_inverse(b) for b in blocks)

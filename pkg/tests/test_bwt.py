import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import RUNNING_EXAMPLE, naive_bwt
from wbwc.bwt import (BwtBlock, IteratedBwt, bwt_blocks, bwt_forward, bwt_inverse, bwt_inverse_blocks,
                      bwt_inverse_iterated, bwt_iterate, lf_mapping, rotation_sort, split_blocks)
from wbwc.errors import CorruptBlock, EmptyText, InvalidParameter


def test_banana_matches_hand_sorted_rotations():
    # rotations of "banana": abanan anaban ananab banana nabana nanaba
    b = bwt_forward(b"banana")
    assert b.data == b"nnbaaa"
    assert b.primary_index == 3


def test_running_example_transform_and_index():
    b = bwt_forward(RUNNING_EXAMPLE)
    assert (b.data, b.primary_index) == naive_bwt(RUNNING_EXAMPLE)
    assert b.data == b"g" + b"t" * 13 + b"g" * 10 + b"t" + b"c" * 11 + b"a" * 14
    assert b.primary_index == 7


def test_single_symbol_is_identity():
    assert bwt_forward(b"x") == BwtBlock(b"x", 0)
    assert bwt_inverse(BwtBlock(b"x", 0)) == b"x"


@pytest.mark.parametrize("t", [b"aaaa", b"abab", b"abcabcabc", b"aabaab" * 5])
def test_periodic_ties_follow_start_index(t):
    assert (bwt_forward(t).data, bwt_forward(t).primary_index) == naive_bwt(t)
    assert bwt_inverse(bwt_forward(t)) == t


def test_against_naive_oracle_small_alphabets():
    rng = random.Random(7)
    for _ in range(300):
        n = rng.randint(1, 120)
        t = bytes(rng.choice(b"ab" if rng.random() < 0.5 else b"abcd") for _ in range(n))
        got = bwt_forward(t)
        assert (got.data, got.primary_index) == naive_bwt(t)


@given(st.binary(min_size=1, max_size=300))
def test_inverse_roundtrip(t):
    assert bwt_inverse(bwt_forward(t)) == t


def test_rotation_sort_is_a_permutation_in_sorted_order():
    rng = random.Random(3)
    t = bytes(rng.choice(b"xyz") for _ in range(500))
    order = rotation_sort(t)
    assert sorted(order.tolist()) == list(range(500))
    rots = [t[i:] + t[:i] for i in order]
    assert rots == sorted(rots)


def test_lf_mapping_steps_back_one_position():
    t = b"mississippi"
    b = bwt_forward(t)
    order = rotation_sort(t)
    lf = lf_mapping(np.frombuffer(b.data, dtype=np.uint8))
    n = len(t)
    row_of = {int(s): r for r, s in enumerate(order)}
    for r, s in enumerate(order):
        assert lf[r] == row_of[(int(s) - 1) % n]


def test_empty_and_bad_index():
    with pytest.raises(EmptyText):
        bwt_forward(b"")
    with pytest.raises(EmptyText):
        bwt_inverse(BwtBlock(b"", 0))
    with pytest.raises(CorruptBlock):
        bwt_inverse(BwtBlock(b"abc", 3))
    with pytest.raises(CorruptBlock):
        bwt_inverse(BwtBlock(b"abc", -1))


def test_iterated_roundtrip_and_depth_zero():
    t = b"the quick brown fox jumps over the lazy dog" * 3
    for depth in range(4):
        it = bwt_iterate(t, depth)
        assert it.depth == depth
        assert bwt_inverse_iterated(it) == t
    assert bwt_iterate(t, 0) == IteratedBwt(t, ())
    assert bwt_iterate(t, 2).data == bwt_forward(bwt_forward(t).data).data
    with pytest.raises(InvalidParameter):
        bwt_iterate(t, -1)


def test_blocks_partition_and_roundtrip():
    assert split_blocks(10, 4) == [(0, 4), (4, 8), (8, 10)]
    assert split_blocks(0, 4) == []
    with pytest.raises(InvalidParameter):
        split_blocks(10, 0)
    t = random.Random(5).randbytes(5000)
    seq = bwt_blocks(t, 777)
    assert [len(b) for b in seq] == [777] * 6 + [5000 - 6 * 777]
    assert bwt_inverse_blocks(seq) == t
    assert bwt_blocks(t, 777, workers=3) == seq
    assert bwt_blocks(t, 10_000) == [bwt_forward(t)]


def test_transform_preserves_counts():
    t = random.Random(11).randbytes(2000)
    assert sorted(bwt_forward(t).data) == sorted(t)

import io
import math
import os
import random
from fractions import Fraction

import pytest

from conftest import RUNNING_EXAMPLE
from wbwc.bwt import bwt_forward
from wbwc.codec import CodecConfig, analyze
from wbwc.errors import EmptyText, InvalidParameter
from wbwc.metrics import entropy0, ic_trace_export, nnr, run_decompose
from wbwc.models import AlphabetMode, Method

FILE = AlphabetMode.FILE


def runs_oracle(t):
    out = []
    for b in t:
        if out and out[-1][0] == b:
            out[-1][1] += 1
        else:
            out.append([b, 1])
    return [tuple(r) for r in out]


def test_run_decomposition_examples():
    d = run_decompose(b"aaabaacccc")
    assert d.lengths == [3, 1, 2, 4] and d.count == 4
    assert run_decompose(b"a").runs == ((ord("a"), 1),)
    assert run_decompose(b"abab").lengths == [1, 1, 1, 1]


def test_runs_agree_with_oracle():
    rng = random.Random(4)
    for _ in range(200):
        t = bytes(rng.choice(b"ab") for _ in range(rng.randint(1, 60)))
        d = run_decompose(t)
        assert list(d.runs) == runs_oracle(t)
        assert sum(d.lengths) == len(t)


def test_nnr_values():
    assert nnr(b"aaabaacccc") == Fraction(2, 5)
    assert float(nnr(b"aaabaacccc")) == 0.4
    assert nnr(b"aaabaacccc") == 0.4 and nnr(b"aaabaacccc") != 0.41
    assert nnr(b"a" * 37) == Fraction(1, 37)
    # no two neighbours in the running example are equal: 50 runs of length 1
    assert len(runs_oracle(RUNNING_EXAMPLE)) == 50
    assert nnr(RUNNING_EXAMPLE) == 1
    assert nnr(bwt_forward(RUNNING_EXAMPLE).data) == Fraction(6, 50)
    assert nnr(bwt_forward(RUNNING_EXAMPLE).data) < nnr(RUNNING_EXAMPLE)


def test_empty_text_rejected():
    for fn in (run_decompose, nnr, entropy0):
        with pytest.raises(EmptyText):
            fn(b"")


def test_entropy_values():
    assert math.isclose(entropy0(b"ab" * 10), 1.0, abs_tol=1e-15)
    assert math.isclose(entropy0(b"abcd" * 9), 2.0, abs_tol=1e-15)
    assert entropy0(b"zzzz") == 0.0
    assert round(entropy0(RUNNING_EXAMPLE), 3) == 1.990
    assert entropy0(RUNNING_EXAMPLE) == entropy0(bytes(sorted(RUNNING_EXAMPLE)))


def test_entropy_matches_static_model():
    for n in (1, 10, 333, 4000):
        t = os.urandom(n)
        rep = analyze(t, CodecConfig(Method.STATIC))
        assert abs(entropy0(t) - rep.avg_bps) < 1e-12


def test_trace_export_csv():
    rep = analyze(RUNNING_EXAMPLE, CodecConfig(Method.B_ADP, alphabet_mode=FILE), trace=True)
    buf = io.StringIO()
    ic_trace_export(rep, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "index,ic_bits,cumulative_bits"
    assert lines[1] == "1,2.000000,2.000000"
    assert len(lines) == 51
    last = lines[-1].split(",")
    assert last[0] == "50" and math.isclose(float(last[2]), rep.net_bits, abs_tol=1e-5)
    with pytest.raises(InvalidParameter):
        ic_trace_export(analyze(RUNNING_EXAMPLE, CodecConfig(Method.B_ADP)), buf)


def test_static_trace_takes_two_values(tmp_path):
    rep = analyze(RUNNING_EXAMPLE, CodecConfig(Method.STATIC, alphabet_mode=FILE), trace=True)
    ic_trace_export(rep, tmp_path / "s.csv")
    values = {line.split(",")[1] for line in (tmp_path / "s.csv").read_text().splitlines()[1:]}
    assert {round(float(v), 2) for v in values} == {1.84, 2.18}

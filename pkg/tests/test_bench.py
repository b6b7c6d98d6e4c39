import hashlib
import random

import pytest

from conftest import RUNNING_EXAMPLE
from wbwc.bench import (CorpusSpec, default_k_grid, format_table3, refine_grid, run_block_study,
                        run_iterative_study, run_table3, sweep_k, table3_rows, thread_count, _Prepared)
from wbwc.codec import CodecConfig, compress
from wbwc.errors import ConfigError, InvalidParameter
from wbwc.metrics import nnr
from wbwc.models import AlphabetMode, Method


def markov_text(seed, n, order_bias=0.9):
    """Bytes from a sticky two-level source: long-ish words over a small alphabet."""
    rng = random.Random(seed)
    words = [bytes(rng.choice(b"abcdefghij") for _ in range(rng.randint(3, 9))) for _ in range(40)]
    out = bytearray()
    while len(out) < n:
        out += rng.choice(words[:8] if rng.random() < order_bias else words) + b" "
    return bytes(out[:n])


@pytest.fixture
def corpus_dir(tmp_path):
    for i in range(3):
        (tmp_path / f"f{i}.txt").write_bytes(markov_text(i, 6000))
    return tmp_path


def write_manifest(path, lines):
    path.write_text("\n".join("\t".join(str(f) for f in line) for line in lines) + "\n")
    return path


def test_manifest_parsing(corpus_dir):
    digest = hashlib.sha256((corpus_dir / "f0.txt").read_bytes()[:4000]).hexdigest()
    m = write_manifest(corpus_dir / "m.tsv", [("# name", "path"), ("a", "f0.txt", 4000, digest),
                                              ("b", corpus_dir / "f1.txt", "-", "-"), ("c", "f2.txt")])
    spec = CorpusSpec.load(m)
    assert [e.name for e in spec.entries] == ["a", "b", "c"]
    assert len(spec.entries[0].read()) == 4000
    with pytest.raises(ConfigError):
        spec.entries[1].read()  # default 4 MiB prefix exceeds the 6000-byte file


@pytest.mark.parametrize("lines", [
    [],
    [("a", "missing.txt")],
    [("a", "f0.txt"), ("a", "f1.txt")],
    [("a", "f0.txt", "many")],
    [("a", "f0.txt", 0)],
    [("a",)],
])
def test_manifest_errors(corpus_dir, lines):
    with pytest.raises(ConfigError):
        CorpusSpec.load(write_manifest(corpus_dir / "bad.tsv", lines))


def test_manifest_hash_mismatch(corpus_dir):
    m = write_manifest(corpus_dir / "m.tsv", [("a", "f0.txt", 100, "0" * 64)])
    with pytest.raises(ConfigError):
        CorpusSpec.load(m).entries[0].read()
    with pytest.raises(ConfigError):
        CorpusSpec.load(corpus_dir / "nope.tsv")


def test_k_grids():
    g = default_k_grid(4 << 20)
    assert g[:16] == [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 16, 24, 32, 48, 64]
    assert max(g) <= (4 << 20) // 4 and g == sorted(set(g))
    assert default_k_grid(20) == list(range(1, 11))
    r = refine_grid(100, 10_000)
    assert min(r) == 75 and max(r) == 125 and 100 in r and len(r) == 11


def test_sweep_examples():
    cfg = CodecConfig(Method.B_WEIGHT, k=1, use_bwt=True, alphabet_mode=AlphabetMode.FILE)
    k, bits = sweep_k(RUNNING_EXAMPLE, Method.B_WEIGHT, cfg, range(1, 11))
    assert k == 3
    prep = _Prepared(RUNNING_EXAMPLE, cfg)
    assert all(bits <= prep.bits(Method.B_WEIGHT, j) for j in range(1, 11))
    assert sweep_k(RUNNING_EXAMPLE, Method.B_2, cfg, [7])[0] == 7
    with pytest.raises(InvalidParameter):
        sweep_k(RUNNING_EXAMPLE, Method.B_2, cfg, [])
    with pytest.raises(InvalidParameter):
        sweep_k(RUNNING_EXAMPLE, Method.STATIC, cfg, [1])


def test_sweep_ties_prefer_smaller_k():
    # one symbol: every k costs the same (zero) bits
    cfg = CodecConfig(Method.B_2, k=1, alphabet_mode=AlphabetMode.FILE)
    assert sweep_k(b"a" * 50, Method.B_2, cfg, [9, 4, 6]) == (4, 0.0)


def test_table3_shape_and_determinism(corpus_dir):
    m = write_manifest(corpus_dir / "m.tsv", [(f"f{i}", f"f{i}.txt", 5000) for i in range(3)])
    spec = CorpusSpec.load(m)
    res = run_table3(spec, k_grid=[2, 8, 32], threads=2)
    assert len(res) == 3 * 7
    assert all(r.ratio > 0 for r in res)
    assert all((r.chosen_k is not None) == r.method.needs_k for r in res)
    rows = table3_rows(res)
    assert [r[0] for r in rows] == ["f0", "f1", "f2"] and all(len(r) == 8 for r in rows)
    md = format_table3(res)
    assert md.count("\n| f") == 3 and "identical with and without BWT" in md
    assert format_table3(res, "tsv").splitlines()[0].split("\t")[0] == "file"
    again = run_table3(spec, k_grid=[2, 8, 32], threads=1)
    assert format_table3(again) == md


def test_counting_methods_blind_to_bwt_at_payload_level():
    t = markov_text(9, 20000)
    for m in (Method.STATIC, Method.B_ADP, Method.F_ADP):
        a = compress(t, CodecConfig(m))
        b = compress(t, CodecConfig(m, use_bwt=True))
        assert abs(8 * (a.payload_len - b.payload_len)) <= 64


def test_weighted_bwt_beats_static_on_repeated_example():
    t = RUNNING_EXAMPLE * 1000
    static = len(compress(t, CodecConfig(Method.STATIC)))
    cfg = CodecConfig(Method.B_WEIGHT, k=1, use_bwt=True)
    k, _ = sweep_k(t, Method.B_WEIGHT, cfg, default_k_grid(len(t)))
    weighted = len(compress(t, CodecConfig(Method.B_WEIGHT, k=k, use_bwt=True)))
    assert weighted < static


def test_iterative_study_rows():
    t = markov_text(3, 8000)
    rows = run_iterative_study(t, 3, Method.B_2, k=16)
    assert [r[0] for r in rows] == [0, 1, 2, 3]
    assert rows[0][2] == nnr(t)
    assert rows[1][2] == min(r[2] for r in rows)
    assert all(r[1] > 0 for r in rows)
    with pytest.raises(InvalidParameter):
        run_iterative_study(t, -1)


def test_block_study_rows():
    t = markov_text(4, 9000)
    rows = run_block_study(t, [1024, 4096, 9000, 20000], Method.B_2, k=16)
    assert [r[0] for r in rows] == [1024, 4096, 9000, 20000]
    single = len(compress(t, CodecConfig(Method.B_2, k=16, use_bwt=True))) / len(t)
    # one block: same payload, header differs only by the block-size field
    assert abs(rows[-1][1] - single) <= 4 / len(t)
    assert rows[2][1] == rows[3][1] or abs(rows[2][1] - rows[3][1]) <= 2 / len(t)
    with pytest.raises(InvalidParameter):
        run_block_study(t, [])


def test_thread_env(monkeypatch):
    monkeypatch.setenv("WBWC_THREADS", "3")
    assert thread_count() == 3
    monkeypatch.setenv("WBWC_THREADS", "0")
    assert thread_count() >= 1
    monkeypatch.setenv("WBWC_THREADS", "x")
    with pytest.raises(ConfigError):
        thread_count()

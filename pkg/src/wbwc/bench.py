"""Benchmark harness: corpus manifests, k sweeps and the three corpus studies.

Every reported ratio comes from a real container produced by
:func:`wbwc.codec.compress`; ``analyze`` estimates are only used to choose k.
"""

from __future__ import annotations

import hashlib
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from . import _kernels as K
from .codec import CodecConfig, _transform, compress
from .errors import ConfigError, InvalidParameter
from .metrics import nnr
from .models import MAX_TOTAL, Alphabet, FrequencyTable, Method, MethodParams, gain_table, initial_weights

DEFAULT_PREFIX = 4 << 20
DEFAULT_BLOCK_SIZES = tuple(8192 << j for j in range(10))  # 8K .. 4M
WEIGHTED = (Method.B_2, Method.B_WEIGHT)
COUNTING = (Method.STATIC, Method.B_ADP, Method.F_ADP)


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    path: Path
    prefix_bytes: int = DEFAULT_PREFIX
    sha256: str | None = None

    def read(self):
        try:
            with open(self.path, "rb") as fh:
                data = fh.read(self.prefix_bytes)
        except OSError as exc:
            raise ConfigError(f"{self.name}: cannot read {self.path}: {exc}") from None
        if len(data) < self.prefix_bytes:
            raise ConfigError(f"{self.name}: file holds {len(data)} bytes, "
                              f"prefix needs {self.prefix_bytes}")
        if self.sha256 and hashlib.sha256(data).hexdigest() != self.sha256.lower():
            raise ConfigError(f"{self.name}: prefix sha256 does not match the manifest")
        return data


@dataclass(frozen=True)
class CorpusSpec:
    entries: tuple

    def __post_init__(self):
        if not self.entries:
            raise ConfigError("corpus manifest lists no files")
        names = [e.name for e in self.entries]
        if len(set(names)) != len(names):
            raise ConfigError("corpus names must be unique")

    @classmethod
    def load(cls, manifest):
        """Parse ``name<TAB>path<TAB>prefix_bytes<TAB>sha256`` lines.

        Blank lines and ``#`` comments are skipped; relative paths resolve
        against the manifest's directory; prefix and sha256 may be ``-``.
        """
        manifest = Path(manifest)
        try:
            text = manifest.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read manifest {manifest}: {exc}") from None
        entries = []
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if not 2 <= len(fields) <= 4:
                raise ConfigError(f"{manifest}:{lineno}: expected 2 to 4 tab-separated fields")
            fields += ["-"] * (4 - len(fields))
            name, path, prefix, digest = (f.strip() for f in fields)
            try:
                prefix = DEFAULT_PREFIX if prefix in ("", "-") else int(prefix)
            except ValueError:
                raise ConfigError(f"{manifest}:{lineno}: bad prefix {prefix!r}") from None
            if prefix < 1:
                raise ConfigError(f"{manifest}:{lineno}: prefix must be positive")
            p = Path(path)
            if not p.is_absolute():
                p = manifest.parent / p
            if not p.is_file():
                raise ConfigError(f"{manifest}:{lineno}: no such file {p}")
            entries.append(CorpusEntry(name, p, prefix, None if digest in ("", "-") else digest))
        return cls(tuple(entries))


@dataclass(frozen=True)
class BenchResult:
    file: str
    method: Method
    bwt: bool
    compressed_bytes: int
    original_bytes: int
    chosen_k: int | None
    elapsed: float

    @property
    def ratio(self):
        return self.compressed_bytes / self.original_bytes


def thread_count():
    """WBWC_THREADS caps parallelism; 0 or unset means one per CPU."""
    raw = os.environ.get("WBWC_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"WBWC_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise ConfigError("WBWC_THREADS must be >= 0")
    return n or (os.cpu_count() or 1)


# -- k sweep -----------------------------------------------------------------

def default_k_grid(n):
    """1..10, then 12, 16, 24, 32, 48, 64, ... (alternating x1.5, x4/3) up to n/4."""
    limit = max(10, n // 4)
    grid = list(range(1, 11))
    a, b = 12, 16
    while a <= limit:
        grid.append(a)
        if b <= limit:
            grid.append(b)
        a, b = a * 2, b * 2
    return grid


def refine_grid(best, n, steps=5, spread=0.25):
    """``steps`` points each side of ``best`` out to +-``spread``."""
    pts = {best}
    for j in range(1, steps + 1):
        d = spread * j / steps
        pts.add(max(1, round(best * (1 - d))))
        pts.add(max(1, min(max(1, n), round(best * (1 + d)))))
    return sorted(pts)


class _Prepared:
    """Transformed text and its alphabet, reused across every k."""

    def __init__(self, t, cfg):
        data = bytes(t)
        if not data:
            raise InvalidParameter("cannot sweep an empty text")
        self.transformed, self.indices = _transform(data, cfg)
        self.alphabet = Alphabet.for_mode(cfg.alphabet_mode, self.transformed)
        self.syms = self.alphabet.to_indices(self.transformed)
        self.index_bits = sum(math.log2(length) for _, length in self.indices)

    def bits(self, method, k):
        params = MethodParams(method, k)
        freqs = FrequencyTable.from_text(self.transformed, self.alphabet) if method.needs_freqs else None
        net, status, *_ = K.model_trace(method.value, params.k or 1, gain_table(params),
                                        initial_weights(params, self.alphabet, freqs),
                                        self.syms, MAX_TOTAL, False)
        if status != K.OK:
            raise InvalidParameter("model failed on the prepared text")
        return net + float(self.index_bits)


def sweep_k(t, method, cfg, grid):
    """(best_k, best_bits) over ``grid``; bits are net plus header, ties go to smaller k."""
    method = Method.parse(method)
    if not method.needs_k:
        raise InvalidParameter(f"{method.label} takes no k")
    grid = sorted(set(int(k) for k in grid))
    if not grid:
        raise InvalidParameter("k grid is empty")
    prep = t if isinstance(t, _Prepared) else _Prepared(t, cfg)
    best = None
    for k in grid:
        bits = prep.bits(method, k)
        if best is None or bits < best[1]:
            best = (k, bits)
    return best


def best_k(t, method, cfg, grid=None):
    """Coarse sweep then local refinement around the coarse argmin."""
    prep = t if isinstance(t, _Prepared) else _Prepared(t, cfg)
    n = len(prep.transformed)
    k, bits = sweep_k(prep, method, cfg, grid or default_k_grid(n))
    if grid is None:
        k, bits = sweep_k(prep, method, cfg, refine_grid(k, n))
    return k, bits


# -- studies -----------------------------------------------------------------

def _measure(name, data, cfg):
    start = time.perf_counter()
    size = len(compress(data, cfg))
    return BenchResult(name, cfg.method, cfg.use_bwt, size, len(data), cfg.k,
                       time.perf_counter() - start)


def bench_file(name, data, k_grid=None, alphabet_mode="fixed256", fixed_k=None):
    """All Table-3 cells for one text.

    ``fixed_k`` maps (method, bwt) to a k to use instead of sweeping.
    """
    out = [_measure(name, data, CodecConfig(m, alphabet_mode=alphabet_mode)) for m in COUNTING]
    for use_bwt in (False, True):
        base = CodecConfig(Method.B_2, k=1, use_bwt=use_bwt, alphabet_mode=alphabet_mode)
        prep = _Prepared(data, base)
        for m in WEIGHTED:
            k = (fixed_k or {}).get((m, use_bwt))
            if k is None:
                k, _ = best_k(prep, m, base, k_grid)
            out.append(_measure(name, data, replace(base, method=m, k=k)))
    return out


def run_table3(corpus, k_grid=None, alphabet_mode="fixed256", fixed_k=None, threads=None):
    """Table-3-shaped results for every corpus file, in manifest order."""
    threads = threads or thread_count()
    jobs = [(e.name, e.read()) for e in corpus.entries]
    run = lambda job: bench_file(job[0], job[1], k_grid, alphabet_mode,  # noqa: E731
                                 (fixed_k or {}).get(job[0]))
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(run, jobs))
    else:
        rows = [run(j) for j in jobs]
    return [r for row in rows for r in row]


def _cell(results, file, method, bwt):
    for r in results:
        if r.file == file and r.method is method and (r.bwt == bwt or method in COUNTING):
            pct = f"{100 * r.ratio:.2f}"
            return f"{pct} ({r.chosen_k})" if r.chosen_k else pct
    return ""


TABLE3_COLUMNS = ("file", "static*", "b-adp*", "f-adp*", "b-2 T", "b-2 BWT", "b-weight T", "b-weight BWT")
TABLE3_FOOTNOTE = ("* identical with and without BWT: these models only see symbol counts. "
                   "Values are compressed/original size in percent, best k in parentheses.")


def table3_rows(results):
    files = list(dict.fromkeys(r.file for r in results))
    rows = []
    for f in files:
        row = [f] + [_cell(results, f, m, False) for m in COUNTING]
        for m in WEIGHTED:
            row += [_cell(results, f, m, False), _cell(results, f, m, True)]
        rows.append(row)
    return rows


def format_table3(results, fmt="markdown"):
    rows = table3_rows(results)
    if fmt == "tsv":
        return "\n".join("\t".join(r) for r in [list(TABLE3_COLUMNS)] + rows) + "\n"
    if fmt != "markdown":
        raise InvalidParameter(f"unknown table format {fmt!r}")
    lines = ["| " + " | ".join(TABLE3_COLUMNS) + " |",
             "|" + "---|" * len(TABLE3_COLUMNS)]
    lines += ["| " + " | ".join(r) + " |" for r in rows]
    return "\n".join(lines) + "\n\n" + TABLE3_FOOTNOTE + "\n"


def _resolve_k(data, method, k, cfg):
    if method.needs_k and k is None:
        k, _ = best_k(data, method, cfg)
    return k if method.needs_k else None


def run_iterative_study(t, max_depth, method=Method.B_2, k=None):
    """(i, compressed_bytes, nnr of BWT^i(t)) for i = 0..max_depth.

    Without ``k`` a weighted method gets its best k for each depth.
    """
    if max_depth < 0:
        raise InvalidParameter("max_depth must be >= 0")
    method = Method.parse(method)
    data = bytes(t)
    out = []
    for i in range(max_depth + 1):
        probe = CodecConfig(Method.B_2, k=1, use_bwt=i > 0, bwt_depth=i)
        prep = _Prepared(data, probe)
        ki = _resolve_k(prep, method, k, probe)
        cfg = CodecConfig(method, ki, use_bwt=i > 0, bwt_depth=i)
        out.append((i, len(compress(data, cfg)), nnr(prep.transformed)))
    return out


def run_block_study(t, sizes=DEFAULT_BLOCK_SIZES, method=Method.B_2, k=None):
    """(block_size, ratio) per block size; ratio from the real container."""
    sizes = list(sizes)
    if not sizes:
        raise InvalidParameter("no block sizes given")
    method = Method.parse(method)
    data = bytes(t)
    out = []
    for size in sizes:
        probe = CodecConfig(Method.B_2, k=1, use_bwt=True, block_size=size)
        ki = _resolve_k(_Prepared(data, probe), method, k, probe)
        cfg = CodecConfig(method, ki, use_bwt=True, block_size=size)
        out.append((size, len(compress(data, cfg)) / len(data)))
    return out

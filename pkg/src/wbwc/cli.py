"""Command-line front end.

Exit codes: 0 success, 1 usage or configuration error, 2 I/O error,
3 corrupt input container.  Human-readable summaries go to stderr; machine
readable ``key=value`` lines, tables and CSV go to stdout or files.
"""

from __future__ import annotations

import argparse
import sys

from . import bench, codec, metrics
from .errors import ConfigError, CorruptBlock, CorruptHeader, EmptyText, InvalidParameter
from .models import AlphabetMode, Method

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_CORRUPT = 0, 1, 2, 3
METHOD_NAMES = [m.label for m in Method]


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def _int_list(text):
    """'1-10,12,16' -> [1..10, 12, 16]"""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        lo, sep, hi = part.partition("-")
        out.extend(range(int(lo), int(hi) + 1) if sep else [int(lo)])
    if not out:
        raise argparse.ArgumentTypeError("empty list")
    return out


def _add_codec_flags(p, need_method=True):
    p.add_argument("--method", choices=METHOD_NAMES, required=need_method)
    p.add_argument("-k", type=int, default=None, help="block length of the weighted models")
    p.add_argument("--bwt", action="store_true", help="apply the BWT before coding")
    p.add_argument("--bwt-depth", type=int, default=None, help="apply the BWT this many times")
    p.add_argument("--block-size", type=int, default=None, help="transform blocks of this many bytes")
    p.add_argument("--alphabet", choices=[a.value for a in AlphabetMode], default="fixed256")


def build_parser():
    p = _Parser(prog="wbwc", description="BWT plus weighted adaptive arithmetic coding.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("compress", help="write a container")
    c.add_argument("input")
    c.add_argument("output")
    _add_codec_flags(c)

    d = sub.add_parser("decompress", help="restore the original bytes")
    d.add_argument("input")
    d.add_argument("output")

    a = sub.add_parser("analyze", help="ideal information content report")
    a.add_argument("input")
    _add_codec_flags(a)
    a.add_argument("--header-mode", choices=[h.value for h in codec.HeaderEstimateMode], default="ic")
    a.add_argument("--trace", metavar="CSV", help="write per-position IC to this file")

    b = sub.add_parser("bench", help="Table-3-style report over a corpus manifest")
    b.add_argument("manifest")
    b.add_argument("--k-grid", type=_int_list, default=None, help="e.g. 1-10,12,16")
    b.add_argument("--alphabet", choices=[a.value for a in AlphabetMode], default="fixed256")
    b.add_argument("--format", choices=["markdown", "tsv"], default="markdown")
    b.add_argument("--output", help="write the table here instead of stdout")

    s = sub.add_parser("sweep", help="best k for a weighted method on one file")
    s.add_argument("input")
    _add_codec_flags(s)
    s.add_argument("--grid", type=_int_list, default=None, help="e.g. 1-10 (default: coarse grid plus refinement)")
    return p


def config_from_args(args, k=None):
    depth = args.bwt_depth
    use_bwt = bool(args.bwt or (depth or 0) >= 1 or args.block_size)
    method = Method.parse(args.method)
    k = args.k if k is None else k
    if method.needs_k and k is None:
        raise ConfigError(f"--method {method.label} needs -k")
    return codec.CodecConfig(method, k if method.needs_k else None, use_bwt=use_bwt,
                             bwt_depth=depth, block_size=args.block_size,
                             alphabet_mode=args.alphabet)


def _read(path):
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _write(path, data):
    if path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
        return
    with open(path, "wb") as fh:
        fh.write(data)


def _say(msg):
    print(msg, file=sys.stderr)


def _emit(**fields):
    for key, value in fields.items():
        print(f"{key}={value}")


def cmd_compress(args):
    cfg = config_from_args(args)
    data = _read(args.input)
    c = codec.compress(data, cfg)
    _write(args.output, c.data)
    n = c.n
    if n:
        _say(f"n={n} payload_bytes={c.payload_len} total_bytes={len(c)} "
             f"bps={8 * len(c) / n:.4f} ideal_total_bps={c.ideal_total_bps:.4f}")
    else:
        _say(f"n=0 payload_bytes=0 total_bytes={len(c)}")
    return EXIT_OK


def cmd_decompress(args):
    data = _read(args.input)
    _write(args.output, codec.decompress(data))
    return EXIT_OK


def cmd_analyze(args):
    cfg = config_from_args(args)
    data = _read(args.input)
    report = codec.analyze(data, cfg, args.header_mode, trace=bool(args.trace))
    if args.trace:
        metrics.ic_trace_export(report, args.trace)
    _emit(n=report.n, net_bits=f"{report.net_bits:.6f}", header_bits=f"{report.header_bits:.6f}",
          avg_bps=f"{report.avg_bps:.6f}", header_bps=f"{report.header_bits / report.n:.6f}",
          total_bps=f"{report.total_bps:.6f}")
    _say(f"{cfg.method.label}: avg {report.avg_bps:.3f} bps, header {report.header_bits / report.n:.3f} bps, "
         f"total {report.total_bps:.3f} bps over {report.n} symbols")
    return EXIT_OK


def cmd_bench(args):
    corpus = bench.CorpusSpec.load(args.manifest)
    results = bench.run_table3(corpus, args.k_grid, args.alphabet)
    table = bench.format_table3(results, args.format)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(table)
    else:
        sys.stdout.write(table)
    return EXIT_OK


def cmd_sweep(args):
    method = Method.parse(args.method)
    if not method.needs_k:
        raise ConfigError(f"--method {method.label} takes no k")
    cfg = config_from_args(args, k=1)
    data = _read(args.input)
    k, bits = (bench.sweep_k(data, method, cfg, args.grid) if args.grid
               else bench.best_k(data, method, cfg))
    _emit(best_k=k, best_bits=f"{bits:.6f}", best_bps=f"{bits / len(data):.6f}")
    return EXIT_OK


COMMANDS = {"compress": cmd_compress, "decompress": cmd_decompress, "analyze": cmd_analyze,
            "bench": cmd_bench, "sweep": cmd_sweep}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except _Usage as exc:
        _say(f"wbwc: usage error: {exc}")
        return EXIT_USAGE
    except (CorruptHeader, CorruptBlock) as exc:
        _say(f"wbwc: corrupt container: {exc}")
        return EXIT_CORRUPT
    except (ConfigError, InvalidParameter, EmptyText) as exc:
        _say(f"wbwc: {exc}")
        return EXIT_USAGE
    except OSError as exc:
        _say(f"wbwc: I/O error: {exc}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

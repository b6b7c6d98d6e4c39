"""
A small corpus study on whatever text is at hand
================================================

Usage: python demos/corpus_study.py FILE [PREFIX_BYTES]

Prints the compression ratio for each model with and without the BWT,
NNR under repeated transforms, and the effect of block size.
"""

import sys
import time
from pathlib import Path

from wbwc import CodecConfig, Method, compress
from wbwc.bench import best_k, run_block_study, run_iterative_study

path = Path(sys.argv[1] if len(sys.argv) > 1 else __file__)
t = path.read_bytes()[: int(sys.argv[2]) if len(sys.argv) > 2 else 1 << 20]
print(f"{path.name}: {len(t)} bytes\n")

for method in Method:
    for use_bwt in (False, True):
        start = time.perf_counter()
        k = None
        if method.needs_k:
            k, _ = best_k(t, method, CodecConfig(method, 1, use_bwt=use_bwt))
        size = len(compress(t, CodecConfig(method, k, use_bwt=use_bwt)))
        print(f"{method.label:<9} bwt={use_bwt!s:<5} k={k!s:<5} {100 * size / len(t):6.2f}%"
              f"  ({time.perf_counter() - start:.1f}s)")

print("\ni  bytes  NNR")
for i, size, v in run_iterative_study(t, 3, Method.B_2, k=16):
    print(f"{i}  {size}  {float(v):.4f}")

print("\nblock  ratio")
sizes = [s for s in (8 << 10, 64 << 10, 512 << 10, 4 << 20) if s <= 4 * len(t)]
for size, ratio in run_block_study(t, sizes, Method.B_2, k=16):
    print(f"{size:>8} {ratio:.4f}")

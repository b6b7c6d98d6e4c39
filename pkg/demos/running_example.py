"""
The 50-symbol example, model by model
=====================================

Average and total bits per symbol for every model, with and without the
BWT, plus the k sweep for the weighted models.
"""

from wbwc import AlphabetMode, CodecConfig, Method, analyze, bwt_forward, nnr
from wbwc.bench import sweep_k

T = b"at" * 7 + b"cg" * 11 + b"at" * 7
FILE = AlphabetMode.FILE

b = bwt_forward(T)
print("T      ", T.decode())
print("BWT(T) ", b.data.decode(), "primary index", b.primary_index)
print("NNR    ", float(nnr(T)), "->", float(nnr(b.data)))
print()

print(f"{'method':<14}{'avg':>8}{'total':>8}{'avg+bwt':>9}{'total+bwt':>11}")
for method, k in [(Method.STATIC, None), (Method.B_ADP, None), (Method.F_ADP, None),
                  (Method.B_2, 3), (Method.B_2, 5), (Method.B_WEIGHT, 3), (Method.B_WEIGHT, 5)]:
    plain = analyze(T, CodecConfig(method, k, alphabet_mode=FILE))
    bwt = analyze(T, CodecConfig(method, k, use_bwt=True, alphabet_mode=FILE))
    name = method.label + (f" k={k}" if k else "")
    print(f"{name:<14}{plain.avg_bps:8.3f}{plain.total_bps:8.3f}{bwt.avg_bps:9.3f}{bwt.total_bps:11.3f}")

# the counting models cannot see the reordering; the weighted ones can
for method in (Method.B_2, Method.B_WEIGHT):
    cfg = CodecConfig(method, 1, use_bwt=True, alphabet_mode=FILE)
    k, bits = sweep_k(T, method, cfg, range(1, 11))
    print(f"\nbest k for {method.label} on BWT(T): {k} ({bits / len(T):.4f} bps)")

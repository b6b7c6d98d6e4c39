"""Burrows-Wheeler transform followed by weighted adaptive arithmetic coding."""

from .bwt import (BwtBlock, IteratedBwt, bwt_blocks, bwt_forward, bwt_inverse, bwt_inverse_blocks,
                  bwt_inverse_iterated, bwt_iterate, lf_mapping, rotation_sort)
from .codec import (CodecConfig, Container, HeaderEstimateMode, IcReport, analyze, compress,
                    decompress, freq_header_decode, freq_header_encode, ic_header_lower_bound,
                    verify_gap, verify_invariance)
from .elias import elias_delta_decode, elias_delta_encode
from .errors import (ConfigError, CorruptBlock, CorruptHeader, EmptyText, HeaderMismatch,
                     InternalInvariantViolation, InvalidParameter, InvarianceViolation,
                     MissingHeader, TruncatedStream, WbwcError, ZeroProbabilitySymbol)
from .metrics import NnrValue, RunDecomposition, entropy0, ic_trace_export, nnr, run_decompose
from .models import (Alphabet, AlphabetMode, FrequencyTable, Method, MethodParams, SymbolInterval,
                     WeightModel, new_model)

__version__ = "0.1.0"

__all__ = [
    "BwtBlock",
    "IteratedBwt",
    "bwt_blocks",
    "bwt_forward",
    "bwt_inverse",
    "bwt_inverse_blocks",
    "bwt_inverse_iterated",
    "bwt_iterate",
    "lf_mapping",
    "rotation_sort",
    "CodecConfig",
    "Container",
    "HeaderEstimateMode",
    "IcReport",
    "analyze",
    "compress",
    "decompress",
    "freq_header_decode",
    "freq_header_encode",
    "ic_header_lower_bound",
    "verify_gap",
    "verify_invariance",
    "elias_delta_decode",
    "elias_delta_encode",
    "ConfigError",
    "CorruptBlock",
    "CorruptHeader",
    "EmptyText",
    "HeaderMismatch",
    "InternalInvariantViolation",
    "InvalidParameter",
    "InvarianceViolation",
    "MissingHeader",
    "TruncatedStream",
    "WbwcError",
    "ZeroProbabilitySymbol",
    "NnrValue",
    "RunDecomposition",
    "entropy0",
    "ic_trace_export",
    "nnr",
    "run_decompose",
    "Alphabet",
    "AlphabetMode",
    "FrequencyTable",
    "Method",
    "MethodParams",
    "SymbolInterval",
    "WeightModel",
    "new_model",
]

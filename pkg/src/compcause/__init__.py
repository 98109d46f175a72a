"""Plug-in information measures, Effort-To-Compress, and binned transfer entropy
for short symbolic time series."""

__version__ = "0.1.0"

from ._accel import BACKEND
from .complexity import EtcResult, etc, etc2d, format_trace, metc, nsrps_chain, nsrps_step
from .errors import EstimatorError, MalformedInputError
from .infotheory import (
    DistributionEstimate, conditional_entropy, empirical_pmf, entropy, joint_entropy, mutual_information,
)
from .symbolic import (
    AcfResult, SymbolEncoding, SymbolSequence, acf, pearson_correlation, quantize, remove_joint_symbol,
    to_joint_symbols,
)
from .transfer_entropy import TeConfig, TeResult, embed_histories, surrogate_test, transfer_entropy

__all__ = [
    "BACKEND", "AcfResult", "DistributionEstimate", "EstimatorError", "EtcResult", "MalformedInputError",
    "SymbolEncoding", "SymbolSequence", "TeConfig", "TeResult", "acf", "conditional_entropy", "embed_histories",
    "empirical_pmf", "entropy", "etc", "etc2d", "format_trace", "joint_entropy", "metc", "mutual_information",
    "nsrps_chain", "nsrps_step", "pearson_correlation", "quantize", "remove_joint_symbol", "surrogate_test",
    "to_joint_symbols", "transfer_entropy",
]

"""First-order plug-in estimators on raw symbol frequencies.

No smoothing or bias correction is applied: zero-count outcomes are simply
absent from the distribution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .symbolic import as_sequence, require_equal_length, require_nonempty, to_joint_symbols

LOG_BASES = {2: math.log(2.0), "2": math.log(2.0), "e": 1.0, math.e: 1.0}


def log_scale(base) -> float:
    """Natural log of ``base``; divide a value in nats by this to change units."""
    try:
        return LOG_BASES[base]
    except (KeyError, TypeError):
        raise ValueError(f"log_base must be 2 or 'e', got {base!r}") from None


def base_label(base) -> str:
    return "bits" if log_scale(base) != 1.0 else "nats"


@dataclass(frozen=True)
class DistributionEstimate:
    probabilities: dict
    sample_count: int

    def __getitem__(self, symbol):
        return self.probabilities[symbol]

    def support(self):
        return sorted(self.probabilities)


def _counts(symbols: np.ndarray) -> np.ndarray:
    _, counts = np.unique(symbols, return_counts=True)
    # Sorted so the sum order depends only on the count multiset.
    return np.sort(counts)


def _entropy_nats(symbols: np.ndarray) -> float:
    p = _counts(symbols) / symbols.shape[0]
    return float(-np.sum(p * np.log(p)))


def empirical_pmf(x) -> DistributionEstimate:
    x = as_sequence(x)
    require_nonempty(x)
    vals, counts = np.unique(x.symbols, return_counts=True)
    n = len(x)
    return DistributionEstimate({int(v): c / n for v, c in zip(vals, counts)}, n)


def entropy(x, log_base=2) -> float:
    """Shannon entropy of the empirical symbol distribution."""
    x = as_sequence(x)
    require_nonempty(x)
    return _entropy_nats(x.symbols) / log_scale(log_base)


def joint_entropy(x, y, log_base=2) -> float:
    x, y = as_sequence(x), as_sequence(y)
    require_equal_length(x, y)
    return entropy(to_joint_symbols(x, y), log_base)


def conditional_entropy(x, y, log_base=2) -> float:
    """H(X|Y) = H(X,Y) - H(Y)."""
    return joint_entropy(x, y, log_base) - entropy(y, log_base)


def mutual_information(x, y, log_base=2) -> float:
    """MI(X,Y) = H(X) + H(Y) - H(X,Y).

    The joint term uses the same counts in either argument order, so the
    result is exactly symmetric.
    """
    x, y = as_sequence(x), as_sequence(y)
    require_equal_length(x, y)
    require_nonempty(x)
    hx = entropy(x, log_base)
    hy = entropy(y, log_base)
    # Sort the marginal terms so MI(x, y) and MI(y, x) add in the same order.
    lo, hi = sorted((hx, hy))
    return lo + hi - joint_entropy(x, y, log_base)

"""Binned transfer entropy with uniform history embedding and permutation surrogates."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import EstimatorError
from .infotheory import base_label, log_scale
from . import kernels as _kern
from .symbolic import SymbolSequence, as_sequence, require_equal_length

_CODE_LIMIT = 2**62


@dataclass(frozen=True)
class TeConfig:
    source_lags: int = 1
    target_lags: int = 1
    log_base: object = 2
    surrogate_count: int = 0
    significance_level: float = 0.05
    rng_seed: int = 0

    def __post_init__(self):
        if int(self.source_lags) < 1 or int(self.target_lags) < 1:
            raise ValueError("source_lags and target_lags must be >= 1")
        if int(self.surrogate_count) < 0:
            raise ValueError("surrogate_count must be >= 0")
        if not 0.0 < float(self.significance_level) < 1.0:
            raise ValueError("significance_level must lie in (0, 1)")
        log_scale(self.log_base)

    def to_dict(self) -> dict:
        return {
            "source_lags": int(self.source_lags),
            "target_lags": int(self.target_lags),
            "log_base": str(self.log_base),
            "surrogate_count": int(self.surrogate_count),
            "significance_level": float(self.significance_level),
            "rng_seed": int(self.rng_seed),
        }


@dataclass(frozen=True)
class SurrogateOutcome:
    null_values: tuple[float, ...]
    threshold: float
    passed: bool
    value_after_test: float


@dataclass(frozen=True)
class TeResult:
    value: float
    log_base: object
    source_lags: int
    target_lags: int
    effective_samples: int
    surrogate: SurrogateOutcome | None = field(default=None)

    @property
    def units(self) -> str:
        return base_label(self.log_base)

    @property
    def value_after_test(self) -> float:
        return self.value if self.surrogate is None else self.surrogate.value_after_test


class Embedding(NamedTuple):
    x_next: np.ndarray
    x_past: np.ndarray
    y_past: np.ndarray

    def tuples(self):
        return list(zip(self.x_next.tolist(), self.x_past.tolist(), self.y_past.tolist()))


def _validate(x: SymbolSequence, y: SymbolSequence, s: int, t: int):
    require_equal_length(x, y)
    if s < 1 or t < 1:
        raise ValueError("lags must be >= 1")
    if len(x) < max(s, t) + 2:
        raise EstimatorError(f"length {len(x)} too short for lags s={s}, t={t}")
    space = x.alphabet_size ** (s + 1) * y.alphabet_size ** t
    if space >= _CODE_LIMIT:
        raise ValueError(f"history code space {space} exceeds 64-bit range; reduce lags or alphabet")


def embed_histories(x, y, s: int, t: int) -> Embedding:
    """Uniform embedding ``(x[n+1], x[n-s+1..n], y[n-t+1..n])``.

    ``n`` runs from ``max(s, t) - 1`` to ``L - 2``, giving ``L - max(s, t)``
    tuples. Histories are composite integers, oldest sample most significant.
    """
    x, y = as_sequence(x), as_sequence(y)
    _validate(x, y, s, t)
    m, n_end = max(s, t), len(x) - 1
    return Embedding(
        x.symbols[m:].copy(),
        np.asarray(_kern.window_codes(x.symbols, s, x.alphabet_size, m - 1, n_end)),
        np.asarray(_kern.window_codes(y.symbols, t, y.alphabet_size, m - 1, n_end)),
    )


def _te_value(y: SymbolSequence, x: SymbolSequence, s: int, t: int, base) -> float:
    nats = _kern.te_nats(x.symbols, y.symbols, s, t, x.alphabet_size, y.alphabet_size)
    return max(0.0, float(nats)) / log_scale(base)


def transfer_entropy(y_source, x_target, config: TeConfig | None = None) -> TeResult:
    """Plug-in TE from ``y_source`` to ``x_target``.

    Computed as ``H(x_next | x_past) - H(x_next | x_past, y_past)`` from one
    set of joint counts. A surrogate test runs when ``config.surrogate_count``
    is positive.
    """
    config = config or TeConfig()
    y, x = as_sequence(y_source), as_sequence(x_target)
    s, t = int(config.target_lags), int(config.source_lags)
    _validate(x, y, s, t)
    value = _te_value(y, x, s, t, config.log_base)
    result = TeResult(value, config.log_base, t, s, len(x) - max(s, t))
    if config.surrogate_count > 0:
        result = _with_surrogates(result, y, x, config)
    return result


def surrogate_test(y_source, x_target, config: TeConfig) -> TeResult:
    """TE plus a one-sided permutation test of the source series.

    Member ``i`` permutes the source with a generator seeded by the ``i``-th
    child of ``SeedSequence(rng_seed)``, so the null list is reproducible.
    """
    if config.surrogate_count < 1:
        raise ValueError("surrogate_count must be >= 1 for a surrogate test")
    return transfer_entropy(y_source, x_target, config)


def _with_surrogates(result: TeResult, y, x, config: TeConfig) -> TeResult:
    s, t = int(config.target_lags), int(config.source_lags)
    children = np.random.SeedSequence(int(config.rng_seed)).spawn(int(config.surrogate_count))
    null = []
    for child in children:
        perm = np.random.default_rng(child).permutation(y.symbols)
        null.append(_te_value(y.with_symbols(perm), x, s, t, config.log_base))
    threshold = float(np.quantile(null, 1.0 - float(config.significance_level)))
    passed = result.value > threshold
    outcome = SurrogateOutcome(tuple(null), threshold, passed, result.value if passed else 0.0)
    return TeResult(
        result.value, result.log_base, result.source_lags, result.target_lags,
        result.effective_samples, outcome,
    )

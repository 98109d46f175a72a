"""Effort-To-Compress via non-sequential recursive pair substitution (NSRPS).

Conventions, fixed so every run is deterministic:

* pairs are counted with a greedy left-to-right non-overlapping scan, so a run
  ``v v v`` holds a single ``(v, v)`` occurrence;
* among equally frequent pairs the one occurring first wins;
* the replacement symbol is the current alphabet size (for a
  :class:`SymbolSequence`) or ``max + 1`` for raw integer labels, and grows by
  one per step.

The normalized value divides the iteration count by ``L - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EstimatorError
from . import kernels as _kern
from .symbolic import SymbolSequence, as_sequence, require_equal_length, to_joint_symbols


@dataclass(frozen=True)
class TraceStep:
    pair: tuple[int, int]
    new_symbol: int
    length: int


@dataclass(frozen=True)
class EtcResult:
    iterations: int
    input_length: int
    normalized: float
    trace: tuple[TraceStep, ...]

    def lengths(self) -> list[int]:
        return [self.input_length] + [t.length for t in self.trace]


def _prepare(x):
    """Return (working int array, first fresh symbol, label offset)."""
    if isinstance(x, SymbolSequence):
        return x.symbols, x.alphabet_size, 0
    arr = np.asarray(x)
    if arr.ndim != 1:
        raise ValueError("expected a 1-D sequence")
    if arr.size == 0:
        return arr.astype(np.int64), 0, 0
    if not np.issubdtype(arr.dtype, np.integer):
        if not np.all(np.mod(arr, 1) == 0):
            raise ValueError("symbols must be integers")
    arr = arr.astype(np.int64)
    shift = -int(arr.min()) if arr.min() < 0 else 0
    return arr + shift, int(arr.max()) + 1 + shift, shift


def nsrps_step(x):
    """Replace the most frequent adjacent pair with a fresh symbol.

    Returns ``(shorter_sequence, replaced_pair)``. A :class:`SymbolSequence`
    input yields a :class:`SymbolSequence` with the alphabet grown by one;
    raw integer input yields an array in the same labels.
    """
    work, fresh, shift = _prepare(x)
    if work.shape[0] < 2:
        raise EstimatorError("pair substitution needs at least two symbols")
    out, pa, pb = _kern.nsrps_step(work, fresh)
    pair = (pa - shift, pb - shift)
    if isinstance(x, SymbolSequence):
        return SymbolSequence(out, x.alphabet_size + 1), pair
    return np.asarray(out) - shift, pair


def nsrps_chain(x) -> list:
    """All intermediate sequences of the NSRPS run, input first."""
    chain = [x if isinstance(x, SymbolSequence) else np.asarray(x)]
    cur = chain[0]
    while len(cur) > 1 and len(set(np.asarray(list(cur)).tolist())) > 1:
        cur, _ = nsrps_step(cur)
        chain.append(cur)
    return chain


def etc(x) -> EtcResult:
    """Number of pair substitutions needed to make ``x`` constant."""
    work, fresh, shift = _prepare(x)
    n = int(work.shape[0])
    if n == 0:
        raise EstimatorError("sequence is empty")
    iters, left, right, lengths = _kern.nsrps_run(work, fresh)
    iters = int(iters)
    trace = tuple(
        TraceStep((int(a) - shift, int(b) - shift), fresh + i - shift, int(m))
        for i, (a, b, m) in enumerate(zip(left, right, lengths))
    )
    return EtcResult(iters, n, iters / (n - 1) if n > 1 else 0.0, trace)


def etc2d(x, y) -> EtcResult:
    """Joint ETC: ETC of the per-position symbol-pair sequence."""
    x, y = as_sequence(x), as_sequence(y)
    require_equal_length(x, y)
    return etc(to_joint_symbols(x, y))


def metc(x, y) -> float:
    """Mutual ETC on normalized values: ETC(x) + ETC(y) - ETC2D(x, y)."""
    x, y = as_sequence(x), as_sequence(y)
    require_equal_length(x, y)
    if len(x) < 2:
        raise EstimatorError("METC needs sequences of length >= 2")
    ex, ey, exy = etc(x).iterations, etc(y).iterations, etc2d(x, y).iterations
    # Shared denominator: combine integer counts first, divide once.
    return (ex + ey - exy) / (len(x) - 1)


def format_trace(result: EtcResult) -> str:
    """One line per iteration, for debugging and golden files."""
    return "\n".join(
        f"step {k}: replace ({s.pair[0]},{s.pair[1]}) -> {s.new_symbol}, length {s.length}"
        for k, s in enumerate(result.trace, start=1)
    )

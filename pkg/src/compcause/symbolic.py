"""Symbol sequences, quantization, and linear diagnostics (correlation, ACF)."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import EstimatorError, MalformedInputError


def _frozen(values, dtype):
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SymbolEncoding:
    """Bijection between original labels and symbol codes ``0..K-1``.

    ``labels[c]`` is the original label of code ``c``.
    """

    labels: tuple

    def __post_init__(self):
        labels = tuple(self.labels)
        if len(set(labels)) != len(labels):
            raise ValueError("encoding labels must be distinct")
        if not labels:
            raise ValueError("encoding needs at least one label")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_values(cls, *series) -> "SymbolEncoding":
        """Sorted union of the distinct values in every series."""
        seen = set()
        for s in series:
            seen.update(np.asarray(s).tolist())
        return cls(tuple(sorted(seen)))

    @property
    def size(self) -> int:
        return len(self.labels)

    def code(self, label) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValueError(f"label {label!r} not in encoding {self.labels}") from None

    def encode(self, values) -> "SymbolSequence":
        lookup = {lab: i for i, lab in enumerate(self.labels)}
        try:
            codes = [lookup[v] for v in np.asarray(values).tolist()]
        except KeyError as exc:
            raise ValueError(f"value {exc.args[0]!r} not in encoding {self.labels}") from None
        return SymbolSequence(codes, self.size, encoding=self)

    def decode(self, seq: "SymbolSequence") -> np.ndarray:
        return np.asarray(self.labels)[seq.symbols]

    def to_dict(self) -> dict:
        return {str(lab): i for i, lab in enumerate(self.labels)}


@dataclass(frozen=True, eq=False)
class SymbolSequence:
    """Finite sequence of integer symbols in ``[0, alphabet_size)``.

    Length zero is constructible; every estimator rejects it.
    """

    symbols: np.ndarray
    alphabet_size: int
    encoding: SymbolEncoding | None = field(default=None, compare=False)

    def __post_init__(self):
        arr = np.asarray(self.symbols)
        if arr.ndim != 1:
            raise ValueError("symbols must be one-dimensional")
        if arr.size and not np.issubdtype(arr.dtype, np.integer):
            if not np.all(np.mod(arr, 1) == 0):
                raise ValueError("symbols must be integers")
        arr = _frozen(arr, np.int64)
        k = int(self.alphabet_size)
        if k < 1:
            raise ValueError("alphabet_size must be positive")
        if arr.size and (arr.min() < 0 or arr.max() >= k):
            raise ValueError(f"symbols must lie in [0, {k})")
        if self.encoding is not None and self.encoding.size != k:
            raise ValueError("encoding size must equal alphabet_size")
        object.__setattr__(self, "symbols", arr)
        object.__setattr__(self, "alphabet_size", k)

    @classmethod
    def from_labels(cls, values, encoding: SymbolEncoding | None = None) -> "SymbolSequence":
        if encoding is None:
            encoding = SymbolEncoding.from_values(values)
        return encoding.encode(values)

    def __len__(self):
        return int(self.symbols.shape[0])

    def __iter__(self):
        return iter(self.symbols.tolist())

    def __eq__(self, other):
        if not isinstance(other, SymbolSequence):
            return NotImplemented
        return self.alphabet_size == other.alphabet_size and np.array_equal(self.symbols, other.symbols)

    def __repr__(self):
        return f"SymbolSequence({self.symbols.tolist()}, alphabet_size={self.alphabet_size})"

    def values(self) -> np.ndarray:
        """Numeric values: decoded labels if an encoding is attached, else the codes."""
        if self.encoding is None:
            return self.symbols.astype(float)
        return np.asarray(self.encoding.decode(self), dtype=float)

    def with_symbols(self, symbols) -> "SymbolSequence":
        return SymbolSequence(symbols, self.alphabet_size, encoding=self.encoding)


def as_sequence(x) -> SymbolSequence:
    """Coerce array-likes of non-negative integers to a :class:`SymbolSequence`."""
    if isinstance(x, SymbolSequence):
        return x
    arr = np.asarray(x)
    if arr.size == 0:
        return SymbolSequence(np.zeros(0, dtype=np.int64), 1)
    return SymbolSequence(arr, int(arr.max()) + 1)


def require_nonempty(*seqs: SymbolSequence):
    for s in seqs:
        if len(s) == 0:
            raise EstimatorError("sequence is empty")


def require_equal_length(*seqs):
    lengths = {len(s) for s in seqs}
    if len(lengths) > 1:
        raise EstimatorError(f"sequences have unequal lengths {sorted(lengths)}")


# -- quantization -----------------------------------------------------------

STRATEGIES = ("equal-width", "equal-frequency")


def _check_series(series):
    x = np.asarray(series, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise EstimatorError("series must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(x)):
        raise EstimatorError("series contains non-finite values")
    return x


def bin_edges(series, n_bins: int, strategy: str = "equal-width") -> np.ndarray:
    """Interior bin edges (``n_bins - 1`` of them) used by :func:`quantize`."""
    if int(n_bins) != n_bins or n_bins < 1:
        raise ValueError("n_bins must be a positive integer")
    n_bins = int(n_bins)
    x = _check_series(series)
    if strategy == "equal-width":
        return np.linspace(x.min(), x.max(), n_bins + 1)[1:-1]
    if strategy == "equal-frequency":
        return np.quantile(x, np.arange(1, n_bins) / n_bins)
    raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")


def quantize(series, n_bins: int, strategy: str = "equal-width") -> SymbolSequence:
    """Map a real series to ``n_bins`` symbols.

    Equal-width bins are half-open except the top one, which includes the
    maximum. Equal-frequency bins use empirical quantile edges; a value equal
    to an edge falls in the lower bin.
    """
    edges = bin_edges(series, n_bins, strategy)
    x = np.asarray(series, dtype=float)
    side = "right" if strategy == "equal-width" else "left"
    codes = np.searchsorted(edges, x, side=side)
    return SymbolSequence(np.minimum(codes, n_bins - 1), int(n_bins))


# -- multivariate transforms ------------------------------------------------

def remove_joint_symbol(sequences: Sequence[SymbolSequence], target: int) -> list[SymbolSequence]:
    """Drop every time index at which any sequence holds ``target``."""
    seqs = [as_sequence(s) for s in sequences]
    if not seqs:
        raise ValueError("need at least one sequence")
    require_equal_length(*seqs)
    keep = np.ones(len(seqs[0]), dtype=bool)
    for s in seqs:
        keep &= s.symbols != target
    if not keep.any():
        raise EstimatorError("removing the target symbol leaves empty sequences")
    return [s.with_symbols(s.symbols[keep]) for s in seqs]


def to_joint_symbols(x, y) -> SymbolSequence:
    """Per-position pair code ``x[i] * K_y + y[i]`` over the product alphabet."""
    x, y = as_sequence(x), as_sequence(y)
    require_equal_length(x, y)
    return SymbolSequence(x.symbols * y.alphabet_size + y.symbols, x.alphabet_size * y.alphabet_size)


# -- linear diagnostics -----------------------------------------------------

def _numeric(x) -> np.ndarray:
    if isinstance(x, SymbolSequence):
        return x.values()
    return np.asarray(x, dtype=float)


def pearson_correlation(x, y) -> float:
    """Sample Pearson coefficient on numeric values (decoded labels for symbols)."""
    a, b = _numeric(x), _numeric(y)
    if a.shape != b.shape:
        raise EstimatorError("inputs have unequal lengths")
    if a.size < 2:
        raise EstimatorError("correlation needs at least two samples")
    da, db = a - a.mean(), b - b.mean()
    va, vb = np.dot(da, da), np.dot(db, db)
    if va == 0 or vb == 0:
        raise EstimatorError("zero variance input")
    r = float(np.dot(da, db) / np.sqrt(va * vb))
    return max(-1.0, min(1.0, r))


@dataclass(frozen=True)
class AcfResult:
    values: np.ndarray
    confidence_halfwidth: float

    def argmax(self, lo: int = 1, hi: int | None = None) -> int:
        """Lag in ``[lo, hi]`` with the largest autocorrelation (first one on ties)."""
        hi = len(self.values) - 1 if hi is None else hi
        return lo + int(np.argmax(self.values[lo:hi + 1]))


def acf(x, max_lag: int) -> AcfResult:
    """Biased sample autocorrelation for lags ``0..max_lag`` with a 95% band."""
    a = _numeric(x)
    n = a.size
    if max_lag < 1:
        raise ValueError("max_lag must be positive")
    if n < max_lag + 2:
        raise EstimatorError(f"series of length {n} too short for max_lag={max_lag}")
    d = a - a.mean()
    c0 = np.dot(d, d) / n
    if c0 == 0:
        raise EstimatorError("zero variance input")
    vals = np.array([np.dot(d[: n - k], d[k:]) / n for k in range(max_lag + 1)]) / c0
    vals[0] = 1.0
    vals.setflags(write=False)
    return AcfResult(vals, 1.96 / np.sqrt(n))


# -- CSV ingestion ----------------------------------------------------------

def read_series_csv(path) -> dict[str, np.ndarray]:
    """Read a header-first CSV into ``{column name: float array}``."""
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    except OSError as exc:
        raise MalformedInputError(f"cannot read {path}: {exc}") from exc
    if len(rows) < 2:
        raise MalformedInputError(f"{path}: need a header row and at least one data row")
    header = [h.strip() for h in rows[0]]
    if len(set(header)) != len(header) or any(not h for h in header):
        raise MalformedInputError(f"{path}: header names must be non-empty and unique")
    cols = [[] for _ in header]
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise MalformedInputError(f"{path}:{lineno}: expected {len(header)} cells, got {len(row)}")
        for j, cell in enumerate(row):
            try:
                cols[j].append(float(cell))
            except ValueError:
                raise MalformedInputError(f"{path}:{lineno}: non-numeric cell {cell!r}") from None
    return {h: np.asarray(c) for h, c in zip(header, cols)}


def write_series_csv(path, columns: dict[str, Sequence]) -> None:
    names = list(columns)
    n = {len(v) for v in columns.values()}
    if len(n) != 1:
        raise ValueError("columns must share one length")
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for row in zip(*(columns[k] for k in names)):
            w.writerow([_fmt_cell(v) for v in row])


def _fmt_cell(v):
    v = float(v)
    return str(int(v)) if v.is_integer() else repr(v)

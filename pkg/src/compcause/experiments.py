"""Three-neuron demonstration: structural reconstruction and table harness.

Three firing patterns ``A``, ``B``, ``C`` of length 12 over {-1, 0, +1} share
their OFF (0) instants, ``C`` is ``B`` rotated by ``k``, and

    X1 = A A A A,   X2 = B C B C,   X3 = C B C B.

The exact patterns are not known, so :func:`reconstruct_patterns` enumerates
every system satisfying the structural constraints and the first-order targets,
then ranks candidates by how many reference METC cells they reproduce.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable

import numpy as np

from .complexity import metc
from .infotheory import entropy, mutual_information
from . import kernels as _kern
from .symbolic import SymbolEncoding, SymbolSequence, acf, pearson_correlation, read_series_csv, remove_joint_symbol
from .transfer_entropy import TeConfig, transfer_entropy

PATTERN_LENGTH = 12
LABELS = SymbolEncoding((-1, 0, 1))
OFF = LABELS.code(0)

PAIRS = (("X1", "X2"), ("X1", "X3"), ("X2", "X3"))
# (rho, MI bits, METC) per pair.
TABLE1 = {("X1", "X2"): (0.0, 0.9183, 0.1277), ("X1", "X3"): (0.0, 0.9183, 0.1277), ("X2", "X3"): (0.0, 0.9183, 0.2766)}
TABLE2 = {("X1", "X2"): (0.0, 0.0, 0.0), ("X1", "X3"): (0.0, 0.0, 0.0), ("X2", "X3"): (0.0, 0.0, 0.0968)}
# Lag-12 TE in natural-log units, X2<->X3 for the full and the OFF-removed system.
TE_TARGETS = {"full": 1.0986, "primed": 0.6931}

MI_TOL = 5e-5
METC_TOL = 5e-5
EXACT_TOL = 1e-12
RHO_TOL = 1e-9
TE_TOL = 1e-3
TE_SYMMETRY_TOL = 1e-9
TE_LAGS = 12
ACF_MAX_LAG = 20


def closed_form_mi() -> float:
    """MI in bits for coincident OFF states at rate 1/3 and independent ON signs."""
    return (1 / 3) * math.log2(3) + (2 / 3) * math.log2(3 / 2)


class SystemConstraintError(ValueError):
    pass


@dataclass(frozen=True)
class NeuronSystem:
    A: tuple
    B: tuple
    C: tuple
    shift_k: int
    repeats: int = 4

    def _series(self, first, second):
        block = np.concatenate([first, second])
        return LABELS.encode(np.tile(block, self.repeats // 2))

    @property
    def X1(self) -> SymbolSequence:
        return LABELS.encode(np.tile(self.A, self.repeats))

    @property
    def X2(self) -> SymbolSequence:
        return self._series(self.B, self.C)

    @property
    def X3(self) -> SymbolSequence:
        return self._series(self.C, self.B)

    def series(self) -> dict[str, SymbolSequence]:
        return {"X1": self.X1, "X2": self.X2, "X3": self.X3}

    def primed(self) -> dict[str, SymbolSequence]:
        """The system with every OFF instant removed."""
        s = self.series()
        return dict(zip(s, remove_joint_symbol(list(s.values()), OFF)))

    def doubled(self) -> "NeuronSystem":
        return NeuronSystem(self.A, self.B, self.C, self.shift_k, self.repeats * 2)

    def zero_positions(self) -> tuple:
        return tuple(int(i) for i in np.flatnonzero(np.asarray(self.B) == 0))

    def to_dict(self) -> dict:
        return {"A": list(self.A), "B": list(self.B), "C": list(self.C), "shift_k": self.shift_k}


def build_system(A, B, C, shift_k: int, repeats: int = 4) -> NeuronSystem:
    A, B, C = (np.asarray(p, dtype=int) for p in (A, B, C))
    for name, p in (("A", A), ("B", B), ("C", C)):
        if p.shape != (PATTERN_LENGTH,):
            raise SystemConstraintError(f"pattern {name} must have length {PATTERN_LENGTH}")
        if not np.isin(p, (-1, 0, 1)).all():
            raise SystemConstraintError(f"pattern {name} must take values in {{-1, 0, +1}}")
    if repeats < 2 or repeats % 2:
        raise SystemConstraintError("repeats must be a positive even number")
    if not (np.array_equal(A == 0, B == 0) and np.array_equal(B == 0, C == 0)):
        raise SystemConstraintError("A, B and C must be OFF (0) at the same instants")
    if not 1 <= shift_k < PATTERN_LENGTH:
        raise SystemConstraintError(f"shift_k must lie in 1..{PATTERN_LENGTH - 1}")
    if not np.array_equal(C, np.roll(B, shift_k)):
        ok = [k for k in range(1, PATTERN_LENGTH) if np.array_equal(C, np.roll(B, k))]
        hint = f"; C matches shift(s) {ok}" if ok else "; C is not a cyclic shift of B"
        raise SystemConstraintError(f"C != B rotated by {shift_k}{hint}")
    return NeuronSystem(tuple(A.tolist()), tuple(B.tolist()), tuple(C.tolist()), int(shift_k), int(repeats))


def system_from_columns(columns: dict) -> NeuronSystem:
    """Recover the patterns from X1, X2, X3 label columns and validate them."""
    try:
        x1, x2, x3 = (np.asarray(columns[c], dtype=float) for c in ("X1", "X2", "X3"))
    except KeyError as exc:
        raise SystemConstraintError(f"missing column {exc.args[0]!r}") from None
    n = PATTERN_LENGTH
    if not (len(x1) == len(x2) == len(x3)) or len(x1) % (2 * n):
        raise SystemConstraintError(f"columns must share a length divisible by {2 * n}")
    if not all(np.all(np.mod(c, 1) == 0) for c in (x1, x2, x3)):
        raise SystemConstraintError("columns must hold integer labels")
    A, B, C = x1[:n].astype(int), x2[:n].astype(int), x2[n:2 * n].astype(int)
    shifts = [k for k in range(1, n) if np.array_equal(C, np.roll(B, k))]
    if not shifts:
        raise SystemConstraintError("X2's second block is not a cyclic shift of its first")
    system = build_system(A, B, C, shifts[0], repeats=len(x1) // n)
    for name, col in (("X1", x1), ("X2", x2), ("X3", x3)):
        expected = LABELS.decode(getattr(system, name))
        if not np.array_equal(col, expected):
            raise SystemConstraintError(f"column {name} does not follow the block structure")
    return system


def load_system(path=None) -> NeuronSystem:
    """Load a system CSV; default is the committed canonical reconstruction."""
    if path is None:
        path = resources.files("compcause") / "data" / "canonical_system.csv"
    return system_from_columns(read_series_csv(path))


def canonical_provenance() -> dict:
    ref = resources.files("compcause") / "data" / "canonical_system.json"
    return json.loads(ref.read_text())


# -- reconstruction search ---------------------------------------------------

@dataclass(frozen=True)
class Candidate:
    system: NeuronSystem
    metc_counts: tuple  # integer numerators: full (X1X2, X1X3, X2X3), primed (same order)
    exact_cells: int
    deviation: int
    fallback_ok: bool
    order: int

    def metc_values(self) -> dict:
        full, primed = self.metc_counts[:3], self.metc_counts[3:]
        lf = len(self.system.X1) - 1
        lp = len(self.system.primed()["X1"]) - 1
        return {
            "full": {f"{a},{b}": c / lf for (a, b), c in zip(PAIRS, full)},
            "primed": {f"{a},{b}": c / lp for (a, b), c in zip(PAIRS, primed)},
        }

    def rank_key(self):
        return (not self.fallback_ok, -self.exact_cells, self.deviation, self.order)


@dataclass
class SearchResult:
    candidates: list
    evaluated: int
    branch: str
    exact: list = field(default_factory=list)

    @property
    def best(self) -> Candidate | None:
        return self.candidates[0] if self.candidates else None


def _metc_targets(n_full: int, n_primed: int) -> tuple:
    full = [round(TABLE1[p][2] * (n_full - 1)) for p in PAIRS]
    primed = [round(TABLE2[p][2] * (n_primed - 1)) for p in PAIRS]
    return tuple(full + primed)


def _etc_n(codes: np.ndarray, fresh: int) -> int:
    return int(_kern.etc_iterations(codes, fresh))


def _metc_count(x: np.ndarray, y: np.ndarray, cache: dict) -> int:
    def single(a):
        key = a.tobytes()
        if key not in cache:
            cache[key] = _etc_n(a, 3)
        return cache[key]

    return single(x) + single(y) - _etc_n(x * 3 + y, 9)


def _fallback_ok(c: tuple) -> bool:
    return c[2] >= 2 * c[0] and c[0] > 0 and c[5] > 0 and c[3] == 0 and c[4] == 0


def _zero_sets(shifts: Iterable[int] | None, size: int):
    ks = range(1, PATTERN_LENGTH) if shifts is None else shifts
    for P in itertools.combinations(range(PATTERN_LENGTH), size):
        for k in ks:
            if {(p + k) % PATTERN_LENGTH for p in P} == set(P):
                yield P, k


def reconstruct_patterns(zero_sets=None, shifts=None, top: int = 20) -> SearchResult:
    """Exhaustive lexicographic search over admissible neuron systems.

    Hard constraints: four shared OFF instants (forced by MI = H(1/3)), an OFF
    set invariant under the rotation, balanced ON signs in ``B`` so that
    H(X2') = 1 bit, and first-order independence of every primed pair (which
    also makes every Pearson coefficient vanish). Surviving systems are
    ranked by: METC fallback ordering satisfied, number of exact METC cells,
    total integer deviation from the METC targets, enumeration order.
    """
    n = PATTERN_LENGTH
    size = 4
    combos = [(P, k) for P, k in _zero_sets(shifts, size) if zero_sets is None or tuple(P) in {tuple(z) for z in zero_sets}]
    n_on = n - size
    targets = _metc_targets(n * 4, n_on * 4)
    signs = np.array(list(itertools.product((-1, 1), repeat=n_on)))
    a_ok = np.abs(signs.sum(axis=1)) < n_on  # X1' must not be constant
    cache: dict = {}
    found = []
    order = 0
    evaluated = 0
    for P, k in combos:
        on = np.array([i for i in range(n) if i not in P])
        for bs in signs:
            if bs.sum() != 0:
                continue
            B = np.zeros(n, dtype=int)
            B[on] = bs
            C = np.roll(B, k)
            Bp, Cp = B[on], C[on]
            if np.sum((Bp == 1) & (Cp == 1)) * 4 != n_on:
                continue
            x2 = np.tile(np.r_[B, C], 2) + 1
            x3 = np.tile(np.r_[C, B], 2) + 1
            x2p = np.tile(np.r_[Bp, Cp], 2) + 1
            x3p = np.tile(np.r_[Cp, Bp], 2) + 1
            m23 = _metc_count(x2, x3, cache)
            m23p = _metc_count(x2p, x3p, cache)
            # Independence of X1' from X2' (and X3'): equal +/- counts per A' value.
            plus = (Bp == 1).astype(int) + (Cp == 1)
            minus = (Bp == -1).astype(int) + (Cp == -1)
            bal = np.stack([((signs == v) * (plus - minus)).sum(axis=1) == 0 for v in (-1, 1)]).all(axis=0)
            for ap in signs[bal & a_ok]:
                A = np.zeros(n, dtype=int)
                A[on] = ap
                x1 = np.tile(A, 4) + 1
                x1p = np.tile(ap, 4) + 1
                counts = (
                    _metc_count(x1, x2, cache), _metc_count(x1, x3, cache), m23,
                    _metc_count(x1p, x2p, cache), _metc_count(x1p, x3p, cache), m23p,
                )
                evaluated += 1
                exact = sum(c == t for c, t in zip(counts, targets))
                dev = sum(abs(c - t) for c, t in zip(counts, targets))
                system = NeuronSystem(tuple(A.tolist()), tuple(B.tolist()), tuple(C.tolist()), int(k))
                found.append(Candidate(system, counts, exact, dev, _fallback_ok(counts), order))
                order += 1
    found.sort(key=Candidate.rank_key)
    exact = [c for c in found if c.exact_cells == len(targets)]
    branch = "exact" if exact else "downgraded"
    keep = [c for c in found[: max(top, 0) or len(found)] if _first_order_ok(c.system)]
    return SearchResult(keep, evaluated, branch, exact[:top])


def _first_order_ok(system: NeuronSystem) -> bool:
    full, primed = system.series(), system.primed()
    for a, b in PAIRS:
        if abs(mutual_information(full[a], full[b]) - closed_form_mi()) > MI_TOL:
            return False
        if abs(mutual_information(primed[a], primed[b])) > EXACT_TOL:
            return False
        for s in (full, primed):
            if abs(pearson_correlation(s[a], s[b])) > RHO_TOL:
                return False
    return all(abs(entropy(primed[c]) - 1.0) <= EXACT_TOL for c in ("X2", "X3"))


# -- reference tables --------------------------------------------------------

@dataclass
class Cell:
    section: str
    name: str
    value: float | None
    target: object
    tolerance: float | None
    passed: bool
    counted: bool = True
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "section": self.section, "name": self.name, "value": self.value,
            "target": self.target, "tolerance": self.tolerance,
            "passed": bool(self.passed), "counted": self.counted, "note": self.note,
        }


@dataclass
class ReferenceReport:
    system: NeuronSystem
    cells: list
    branches: dict
    values: dict

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cells if c.counted)

    def failures(self) -> list:
        return [c for c in self.cells if c.counted and not c.passed]

    def to_dict(self) -> dict:
        return {
            "system": self.system.to_dict(),
            "branches": dict(self.branches),
            "values": self.values,
            "cells": [c.to_dict() for c in self.cells],
            "passed": self.passed,
        }

    def to_table(self) -> str:
        out = []
        for title, key in (("OFF instants kept", "full"), ("OFF instants removed", "primed")):
            out.append(title)
            out.append(f"  {'Pair':<10}{'rho':>12}{'MI (bits)':>12}{'METC':>10}")
            for pair, row in self.values[key]["pairs"].items():
                out.append(f"  {pair:<10}{row['rho']:>12.4f}{row['mi_bits']:>12.4f}{row['metc']:>10.4f}")
            out.append("")
        out.append(f"Lag-{TE_LAGS} transfer entropy (nats / bits; after surrogate test)")
        for key in ("full", "primed"):
            for pair, row in self.values["te"][key].items():
                out.append(
                    f"  {key:<7}{pair:<10}{row['nats']:>10.4f}{row['bits']:>10.4f}{row['after_test_nats']:>10.4f}"
                )
        out.append("")
        out.append("Checks")
        for c in self.cells:
            flag = "PASS" if c.passed else "FAIL"
            if not c.counted:
                flag = "info" if c.passed else "info-miss"
            out.append(f"  [{flag:>9}] {c.section}: {c.name}" + (f"  ({c.note})" if c.note else ""))
        out.append(f"METC branch: {self.branches['metc']}; TE branch: {self.branches['te']}")
        out.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(out)


def _near(value, target, tol):
    return abs(value - target) <= tol


def run_reference_tables(system: NeuronSystem, surrogates: int = 100, level: float = 0.05, seed: int = 0) -> ReferenceReport:
    """Evaluate every table cell and the lag-12 TE checks against the reference values."""
    cells: list[Cell] = []
    values: dict = {}
    cf = closed_form_mi()

    def table(key, series, targets):
        rows = {}
        for a, b in PAIRS:
            rho = pearson_correlation(series[a], series[b])
            mi = mutual_information(series[a], series[b])
            m = metc(series[a], series[b])
            rows[f"{a},{b}"] = {"rho": rho, "mi_bits": mi, "metc": m}
            t_rho, t_mi, _ = targets[(a, b)]
            cells.append(Cell(key, f"rho({a},{b})", rho, t_rho, RHO_TOL, _near(rho, t_rho, RHO_TOL)))
            tol = MI_TOL if key == "full" else EXACT_TOL
            cells.append(Cell(key, f"MI({a},{b})", mi, t_mi, tol, _near(mi, t_mi, tol)))
            if key == "full":
                cells.append(Cell(key, f"MI({a},{b}) closed form", mi, cf, EXACT_TOL, _near(mi, cf, EXACT_TOL)))
        values[key] = {"length": len(series["X1"]), "pairs": rows}
        return rows

    full, primed = system.series(), system.primed()
    rows_full = table("full", full, TABLE1)
    rows_primed = table("primed", primed, TABLE2)
    for c in ("X2", "X3"):
        h = entropy(primed[c])
        cells.append(Cell("primed", f"H({c}')", h, 1.0, EXACT_TOL, _near(h, 1.0, EXACT_TOL)))

    # METC: exact cells if every one matches, else ordering properties.
    metc_cells = []
    for key, rows, targets in (("full", rows_full, TABLE1), ("primed", rows_primed, TABLE2)):
        for a, b in PAIRS:
            v = rows[f"{a},{b}"]["metc"]
            t = targets[(a, b)][2]
            metc_cells.append(Cell(key, f"METC({a},{b})", v, t, METC_TOL, _near(v, t, METC_TOL)))
    exact = all(c.passed for c in metc_cells)
    branch = "exact" if exact else "downgraded"
    for c in metc_cells:
        c.counted = exact
        if not exact:
            c.note = "reported only; ordering properties apply"
    cells.extend(metc_cells)
    if not exact:
        f = {p: rows_full[p]["metc"] for p in rows_full}
        g = {p: rows_primed[p]["metc"] for p in rows_primed}
        cells.append(Cell("metc-order", "METC(X2,X3) >= 2*METC(X1,X2) > 0", None, True, None,
                          f["X2,X3"] >= 2 * f["X1,X2"] and f["X1,X2"] > 0))
        cells.append(Cell("metc-order", "METC(X2,X3) >= 2*METC(X1,X3) > 0", None, True, None,
                          f["X2,X3"] >= 2 * f["X1,X3"] and f["X1,X3"] > 0))
        cells.append(Cell("metc-order", "METC(X2',X3') > 0", g["X2,X3"], ">0", None, g["X2,X3"] > 0))
        cells.append(Cell("metc-order", "METC(X1',X2') = METC(X1',X3') = 0", None, 0.0, 0.0,
                          g["X1,X2"] == 0 and g["X1,X3"] == 0))

    te_values, te_branch = _te_section(system, cells, surrogates, level, seed)
    values["te"] = te_values

    r = acf(full["X1"], ACF_MAX_LAG)
    lag = r.argmax(1, ACF_MAX_LAG)
    values["acf_X1"] = {"values": r.values.tolist(), "confidence_halfwidth": r.confidence_halfwidth}
    cells.append(Cell("acf", "argmax ACF(X1) over lags 1..20", lag, 12, 0, lag == 12))

    doubled = system.doubled()
    dfull, dprimed = doubled.series(), doubled.primed()
    for key, base, dbl in (("full", full, dfull), ("primed", primed, dprimed)):
        for a, b in PAIRS:
            v0 = mutual_information(base[a], base[b])
            v1 = mutual_information(dbl[a], dbl[b])
            cells.append(Cell("doubled", f"{key} MI({a},{b}) at length {len(dbl[a])}", v1, v0, EXACT_TOL,
                              _near(v1, v0, EXACT_TOL)))

    return ReferenceReport(system, cells, {"metc": branch, "te": te_branch}, values)


def _te_section(system, cells, surrogates, level, seed):
    ln2 = math.log(2.0)
    out = {}
    exact_cells = []
    prop_cells = []
    for key, series in (("full", system.series()), ("primed", system.primed())):
        rows = {}
        for i, (src, dst) in enumerate(itertools.permutations(("X1", "X2", "X3"), 2)):
            cfg = TeConfig(TE_LAGS, TE_LAGS, "e", surrogates, level, seed + i)
            res = transfer_entropy(series[src], series[dst], cfg)
            rows[f"{src}->{dst}"] = {
                "nats": res.value, "bits": res.value / ln2,
                "after_test_nats": res.value_after_test,
                "passed_surrogate": None if res.surrogate is None else res.surrogate.passed,
            }
        out[key] = rows
        target = TE_TARGETS[key]
        fwd, bwd = rows["X2->X3"]["nats"], rows["X3->X2"]["nats"]
        for name, v in (("X2->X3", fwd), ("X3->X2", bwd)):
            exact_cells.append(Cell(f"te-{key}", f"TE({name}) nats, lag {TE_LAGS}", v, target, TE_TOL,
                                    _near(v, target, TE_TOL), note=f"{v / ln2:.4f} bits"))
        x1_rows = {p: r["after_test_nats"] for p, r in rows.items() if "X1" in p}
        prop_cells.append(Cell(f"te-{key}", "TE(X2->X3) = TE(X3->X2)", abs(fwd - bwd), 0.0, TE_SYMMETRY_TOL,
                               abs(fwd - bwd) <= TE_SYMMETRY_TOL))
        prop_cells.append(Cell(f"te-{key}", "X2<->X3 TEs exceed every X1 TE", min(fwd, bwd),
                               f"> {max(x1_rows.values()):.4g}", None, min(fwd, bwd) > max(x1_rows.values())))
        for p, v in x1_rows.items():
            prop_cells.append(Cell(f"te-{key}", f"TE({p}) after surrogate test", v, 0.0, 0.0, v == 0.0))
    exact = all(c.passed for c in exact_cells)
    # X1 terms are required to vanish in both branches.
    x1_cells = [c for c in prop_cells if "after surrogate test" in c.name]
    if exact:
        for c in prop_cells:
            c.counted = c in x1_cells
        branch = "exact"
    else:
        for c in exact_cells:
            c.counted = False
            c.note += "; reported only, property fallback applies"
        branch = "downgraded"
    cells.extend(exact_cells)
    cells.extend(prop_cells)
    return out, branch

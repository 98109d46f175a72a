"""Command-line front end.

Exit codes: 0 success, 2 malformed input, 3 invalid parameters,
4 estimator error, 5 reference target failed.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import itertools
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .complexity import etc, metc
from .errors import EstimatorError, MalformedInputError
from .experiments import (
    SystemConstraintError, canonical_provenance, load_system, reconstruct_patterns,
    run_reference_tables, system_from_columns,
)
from .infotheory import base_label, entropy, mutual_information
from .symbolic import SymbolEncoding, acf, bin_edges, pearson_correlation, quantize, read_series_csv
from .transfer_entropy import TeConfig, transfer_entropy

SCHEMA_VERSION = 1
KINDS = ("entropy", "mi", "metc", "etc", "te", "acf", "corr")
EXIT_OK, EXIT_INPUT, EXIT_PARAM, EXIT_ESTIMATOR, EXIT_TARGET = 0, 2, 3, 4, 5


class ParameterError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARAM, f"{self.prog}: error: {message}\n")


def _base(value):
    if value not in ("2", "e"):
        raise argparse.ArgumentTypeError("base must be 2 or e")
    return 2 if value == "2" else "e"


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="compcause", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"compcause {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, need_input=True):
        sp.add_argument("--input", required=need_input, help="CSV file with a header row")
        sp.add_argument("--columns", help="comma-separated column names (default: all)")
        sp.add_argument("--format", choices=("json", "csv", "table"), default="json")
        sp.add_argument("--output", help="report path (default: stdout)")

    def symbols(sp):
        sp.add_argument("--symbolic", action="store_true",
                        help="treat integer-valued columns as labels, no quantization")
        sp.add_argument("--bins", type=int, default=3)
        sp.add_argument("--strategy", choices=("equal-width", "equal-frequency"), default="equal-width")

    m = sub.add_parser("measure", help="compute a measure for selected columns")
    common(m)
    symbols(m)
    m.add_argument("--kind", choices=KINDS, required=True)
    m.add_argument("--base", type=_base, default=2)
    m.add_argument("--source")
    m.add_argument("--target")
    m.add_argument("--lags", type=int, help="sets both --source-lags and --target-lags")
    m.add_argument("--source-lags", type=int, default=1)
    m.add_argument("--target-lags", type=int, default=1)
    m.add_argument("--surrogates", type=int, default=0)
    m.add_argument("--level", type=float, default=0.05)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--max-lag", type=int, default=20)

    a = sub.add_parser("acf", help="sample autocorrelation per column (plot-ready)")
    common(a)
    a.add_argument("--max-lag", type=int, default=20)

    q = sub.add_parser("quantize", help="quantize columns and write symbols plus encoding JSON")
    common(q)
    symbols(q)

    r = sub.add_parser("reproduce-paper", help="reproduce the three-neuron tables")
    common(r, need_input=False)
    r.add_argument("--search", action="store_true", help="regenerate the system by exhaustive search")
    r.add_argument("--surrogates", type=int, default=100)
    r.add_argument("--level", type=float, default=0.05)
    r.add_argument("--seed", type=int, default=0)
    return p


# -- helpers -----------------------------------------------------------------

def _digest(path) -> str | None:
    if path is None:
        return None
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _select(data: dict, spec: str | None) -> dict:
    if not spec:
        return data
    names = [c.strip() for c in spec.split(",") if c.strip()]
    missing = [c for c in names if c not in data]
    if missing:
        raise ParameterError(f"unknown column(s) {missing}; available {list(data)}")
    return {c: data[c] for c in names}


def _to_symbols(cols: dict, args) -> tuple[dict, dict]:
    """Symbolize columns. Returns (sequences, encoding description)."""
    if args.symbolic:
        for name, v in cols.items():
            if not np.all(np.mod(v, 1) == 0):
                raise MalformedInputError(f"column {name} is not integer-valued; drop --symbolic")
        enc = SymbolEncoding.from_values(*(v.astype(int) for v in cols.values()))
        return ({k: enc.encode(v.astype(int)) for k, v in cols.items()},
                {"type": "labels", "mapping": enc.to_dict()})
    if args.bins < 1:
        raise ParameterError("--bins must be >= 1")
    seqs, tables = {}, {}
    for k, v in cols.items():
        seqs[k] = quantize(v, args.bins, args.strategy)
        tables[k] = bin_edges(v, args.bins, args.strategy).tolist()
    return seqs, {"type": "bins", "strategy": args.strategy, "bins": args.bins, "interior_edges": tables}


def _emit(report: dict, rows: list[dict], fmt: str, output: str | None, text: str | None = None):
    if fmt == "json":
        body = json.dumps(report, indent=2, sort_keys=True) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        fields = sorted({k for r in rows for k in r})
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: r.get(k, "") for k in fields})
        body = buf.getvalue()
    else:
        body = (text if text is not None else _table(rows)) + "\n"
    if output:
        Path(output).write_text(body)
    else:
        sys.stdout.write(body)


def _table(rows: list[dict]) -> str:
    if not rows:
        return "(no results)"
    fields = list(rows[0])
    cells = [[_fmt(r.get(f, "")) for f in fields] for r in rows]
    widths = [max(len(f), *(len(c[i]) for c in cells)) for i, f in enumerate(fields)]
    lines = ["  ".join(f.ljust(w) for f, w in zip(fields, widths))]
    lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)) for row in cells]
    return "\n".join(lines)


def _fmt(v):
    return f"{v:.6g}" if isinstance(v, float) else str(v)


def _envelope(args, config: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": "compcause",
        "version": __version__,
        "command": args.command,
        "config": config,
        "input": args.input,
        "input_digest": _digest(args.input),
    }


# -- subcommands -------------------------------------------------------------

def cmd_measure(args) -> int:
    cols = _select(read_series_csv(args.input), args.columns)
    kind = args.kind
    s_lags = args.lags if args.lags is not None else args.source_lags
    t_lags = args.lags if args.lags is not None else args.target_lags
    config = {
        "kind": kind, "columns": list(cols), "base": str(args.base), "symbolic": args.symbolic,
        "bins": args.bins, "strategy": args.strategy,
    }
    rows: list[dict] = []
    units = base_label(args.base)
    names = list(cols)
    if kind in ("corr", "acf"):
        if kind == "corr":
            _need_pairs(names)
            for a, b in itertools.combinations(names, 2):
                rows.append({"measure": "corr", "x": a, "y": b, "value": pearson_correlation(cols[a], cols[b]),
                             "units": "dimensionless"})
        else:
            config["max_lag"] = args.max_lag
            rows = _acf_rows(cols, args.max_lag)
        return _finish(args, config, rows, None)

    seqs, encoding = _to_symbols(cols, args)
    if kind == "entropy":
        for a in names:
            rows.append({"measure": "entropy", "x": a, "value": entropy(seqs[a], args.base), "units": units})
    elif kind == "etc":
        for a in names:
            r = etc(seqs[a])
            rows.append({"measure": "etc", "x": a, "value": r.iterations, "normalized": r.normalized,
                         "length": r.input_length, "units": "iterations"})
    elif kind in ("mi", "metc"):
        _need_pairs(names)
        for a, b in itertools.combinations(names, 2):
            if kind == "mi":
                rows.append({"measure": "mi", "x": a, "y": b,
                             "value": mutual_information(seqs[a], seqs[b], args.base), "units": units})
            else:
                rows.append({"measure": "metc", "x": a, "y": b, "value": metc(seqs[a], seqs[b]),
                             "units": "normalized"})
    elif kind == "te":
        cfg = TeConfig(s_lags, t_lags, args.base, args.surrogates, args.level, args.seed)
        config["te"] = cfg.to_dict()
        if args.source or args.target:
            if not (args.source and args.target):
                raise ParameterError("--source and --target go together")
            for c in (args.source, args.target):
                if c not in seqs:
                    raise ParameterError(f"unknown column {c!r}")
            pairs = [(args.source, args.target)]
        else:
            _need_pairs(names)
            pairs = list(itertools.permutations(names, 2))
        for src, dst in pairs:
            res = transfer_entropy(seqs[src], seqs[dst], cfg)
            row = {"measure": "te", "source": src, "target": dst, "value": res.value, "units": units,
                   "source_lags": res.source_lags, "target_lags": res.target_lags,
                   "effective_samples": res.effective_samples, "value_after_test": res.value_after_test}
            if res.surrogate is not None:
                row["passed"] = res.surrogate.passed
                row["threshold"] = res.surrogate.threshold
            rows.append(row)
    return _finish(args, config, rows, encoding)


def _need_pairs(names):
    if len(names) < 2:
        raise ParameterError("pairwise measures need at least two columns")


def _acf_rows(cols, max_lag):
    rows = []
    for name, v in cols.items():
        r = acf(v, max_lag)
        for lag, val in enumerate(r.values.tolist()):
            rows.append({"series": name, "lag": lag, "acf": val, "band": r.confidence_halfwidth})
    return rows


def _finish(args, config, rows, encoding) -> int:
    report = _envelope(args, config)
    report["encoding"] = encoding
    report["results"] = rows
    _emit(report, rows, args.format, args.output)
    return EXIT_OK


def cmd_acf(args) -> int:
    cols = _select(read_series_csv(args.input), args.columns)
    config = {"max_lag": args.max_lag, "columns": list(cols)}
    return _finish(args, config, _acf_rows(cols, args.max_lag), None)


def cmd_quantize(args) -> int:
    cols = _select(read_series_csv(args.input), args.columns)
    seqs, encoding = _to_symbols(cols, args)
    rows = [dict(zip(seqs, vals)) for vals in zip(*(s.symbols.tolist() for s in seqs.values()))]
    config = {"columns": list(cols), "symbolic": args.symbolic, "bins": args.bins, "strategy": args.strategy}
    if args.output:
        enc_path = Path(args.output).with_suffix(".encoding.json")
        enc_path.write_text(json.dumps(encoding, indent=2, sort_keys=True) + "\n")
    report = _envelope(args, config)
    report["encoding"] = encoding
    report["results"] = rows
    _emit(report, rows, args.format, args.output)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    config = {"search": args.search, "surrogates": args.surrogates, "level": args.level, "seed": args.seed}
    report = _envelope(args, config)
    if args.search:
        found = reconstruct_patterns()
        if found.best is None:
            report.update({"passed": False, "error": "search returned no admissible system"})
            _emit(report, [], args.format, args.output, "search returned no admissible system")
            return EXIT_TARGET
        system = found.best.system
        report["provenance"] = {
            "source": "search", "evaluated": found.evaluated, "metc_branch": found.branch,
            "metc_numerators": list(found.best.metc_counts), "exact_metc_cells": found.best.exact_cells,
            "runner_up": [c.system.to_dict() for c in found.candidates[1:4]],
        }
    else:
        try:
            system = (load_system() if args.input is None
                      else system_from_columns(read_series_csv(args.input)))
        except SystemConstraintError as exc:
            report.update({"passed": False, "error": f"invalid system: {exc}"})
            _emit(report, [], args.format, args.output, f"invalid system: {exc}")
            print(f"compcause: invalid system: {exc}", file=sys.stderr)
            return EXIT_TARGET
        report["provenance"] = ({"source": "canonical", **canonical_provenance()} if args.input is None
                                else {"source": "file"})
    ref = run_reference_tables(system, args.surrogates, args.level, args.seed)
    report.update(ref.to_dict())
    rows = [c.to_dict() for c in ref.cells]
    _emit(report, rows, args.format, args.output, ref.to_table())
    if not ref.passed:
        names = ", ".join(f"{c.section}: {c.name}" for c in ref.failures())
        print(f"compcause: target cells failed: {names}", file=sys.stderr)
        return EXIT_TARGET
    return EXIT_OK


COMMANDS = {"measure": cmd_measure, "acf": cmd_acf, "quantize": cmd_quantize, "reproduce-paper": cmd_reproduce}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except MalformedInputError as exc:
        print(f"compcause: malformed input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EstimatorError as exc:
        print(f"compcause: estimator error: {exc}", file=sys.stderr)
        return EXIT_ESTIMATOR
    except ValueError as exc:
        print(f"compcause: invalid parameter: {exc}", file=sys.stderr)
        return EXIT_PARAM


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

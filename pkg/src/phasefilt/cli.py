"""Command-line entry point: design, analyze, simulate, tables."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from pathlib import Path

from . import __version__
from .analysis import response_report
from .exceptions import DesignError
from .harness import run_scenario, threshold_estimate
from .specfile import (
    SpecError,
    bundled_filter,
    bundled_scenario,
    bundled_scenario_names,
    designed_document,
    load_design,
    load_filter_spec,
    load_scenario,
)
from .tables import TABLES

log = logging.getLogger("phasefilt")

EXIT_OK, EXIT_NUMERIC, EXIT_USAGE = 0, 1, 2
BUNDLED = "bundled:"


class UsageError(Exception):
    pass


def _snr_range(text: str):
    try:
        start, stop, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("expected START:STOP:STEP, e.g. 0:20:2") from None
    if step <= 0 or stop < start:
        raise argparse.ArgumentTypeError("need STEP > 0 and STOP >= START")
    n = int((stop - start) / step + 1e-9) + 1
    return [start + k * step for k in range(n)]


def _open_out(path):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _write(path, text):
    fh, close = _open_out(path)
    try:
        fh.write(text)
    finally:
        if close:
            fh.close()


def _load_spec(ref: str):
    if ref.startswith(BUNDLED):
        return bundled_filter(ref[len(BUNDLED):])
    if not Path(ref).is_file():
        raise UsageError(f"spec file not found: {ref}")
    return load_filter_spec(ref)


def cmd_design(args) -> int:
    spec = _load_spec(args.spec)
    doc = designed_document(spec)
    _write(args.out, json.dumps(doc, indent=2) + "\n")
    log.info("designed %s filter, q = %.6g", doc["kind"], doc["q"])
    return EXIT_OK


def cmd_analyze(args) -> int:
    ref = args.filter
    if ref.startswith(BUNDLED):
        filt = bundled_filter(ref[len(BUNDLED):]).design()
    else:
        if not Path(ref).is_file():
            raise UsageError(f"filter file not found: {ref}")
        _, filt = load_design(ref)
    report = response_report(filt, f_c=args.f_c, n_grid=args.grid)
    _write(args.out, report.to_csv())
    if args.summary:
        _write(args.summary, report.to_json() + "\n")
    return EXIT_OK


def cmd_simulate(args) -> int:
    ref = args.scenario
    if ref.startswith(BUNDLED) or (not Path(ref).exists() and ref in bundled_scenario_names()):
        spec = bundled_scenario(ref.removeprefix(BUNDLED))
    else:
        if not Path(ref).is_file():
            raise UsageError(f"scenario file not found: {ref}")
        spec = load_scenario(ref)
    scenario = spec.build(trials=args.trials, seed=args.seed, snr_db=args.snr_range)
    t0 = time.perf_counter()
    result = run_scenario(scenario, jobs=args.jobs)
    log.info("simulated %s in %.1f s", scenario.name or ref, time.perf_counter() - t0)
    thresholds = threshold_estimate(result, args.threshold) if args.threshold is not None else None
    _write(args.out, result.to_csv(thresholds=thresholds))
    return EXIT_OK


def cmd_tables(args) -> int:
    names = args.table or sorted(TABLES)
    unknown = [t for t in names if t not in TABLES]
    if unknown:
        raise UsageError(f"unknown table(s): {', '.join(unknown)}")
    fh, close = _open_out(args.out)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["table", "id", "kind", "K1", "K0", "M_or_1/f_c", "f_c", "q", "v_LPF", "v_BPF", "v_BPF_K0t0", "v_BPF_K0t1", "v_BPF_K0t2", "v_BPF_K0t3"])
        for t in names:
            for spec in TABLES[t]:
                doc = designed_document(spec)
                v = doc["diagnostics"]["v_BPF"]
                f_c = spec.f_c if spec.kind == "iir" else 1.0 / spec.M
                w.writerow([t, spec.id, spec.kind, spec.K1, spec.K0, f"{1.0 / f_c:.2f}", f"{f_c:.4f}", f"{doc['q']:.3f}",
                            f"{doc['diagnostics']['v_LPF']:.4g}", f"{v[str(spec.K0)]:.4g}"] + [f"{v[str(k)]:.4g}" for k in range(4)])
    finally:
        if close:
            fh.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="phasefilt", description="Design and evaluate phase/frequency smoothing filters.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("design", help="design a filter from a JSON spec")
    d.add_argument("spec", help="spec file, or bundled:TABLE/ROW (e.g. bundled:table2/D2)")
    d.add_argument("--out", help="output JSON path (default stdout)")
    d.set_defaults(func=cmd_design)

    a = sub.add_parser("analyze", help="frequency response and phase-linearity table")
    a.add_argument("filter", help="designed-filter JSON, spec file, or bundled:TABLE/ROW")
    a.add_argument("--out", help="CSV path (default stdout)")
    a.add_argument("--summary", help="also write a JSON summary here")
    a.add_argument("--f-c", type=float, dest="f_c", help="passband edge for the deviation column")
    a.add_argument("--grid", type=int, default=1025, help="points on [0, 0.5] (default 1025)")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("simulate", help="Monte Carlo run of a scenario")
    s.add_argument("scenario", help="scenario file or bundled scenario name (e.g. type2-config2)")
    s.add_argument("--out", help="CSV path (default stdout)")
    s.add_argument("--seed", type=int, help="override the scenario seed")
    s.add_argument("--trials", type=int, help="override trials per SNR")
    s.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    s.add_argument("--snr-range", type=_snr_range, metavar="START:STOP:STEP", help="override the SNR sweep")
    s.add_argument("--threshold", type=float, nargs="?", const=3.0, metavar="MARGIN_DB",
                   help="append failure thresholds (default margin 3 dB)")
    s.set_defaults(func=cmd_simulate)

    t = sub.add_parser("tables", help="regenerate design-table diagnostics")
    t.add_argument("table", nargs="*", help=f"tables to print (default all: {', '.join(sorted(TABLES))})")
    t.add_argument("--out", help="CSV path (default stdout)")
    t.set_defaults(func=cmd_tables)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    if getattr(args, "trials", None) is not None and args.trials < 1:
        print("phasefilt: error: --trials must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (SpecError, UsageError, FileNotFoundError) as exc:
        print(f"phasefilt: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DesignError as exc:
        detail = f" {exc.diagnostics}" if exc.diagnostics else ""
        print(f"phasefilt: design failed: {exc}{detail}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, ArithmeticError) as exc:  # includes numpy's LinAlgError
        print(f"phasefilt: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

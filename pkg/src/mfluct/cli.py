"""Batch command-line interface and pipeline orchestration.

Subcommands: ingest, returns, detrend, fit, scan, slide, mfa, stats,
surrogate, pipeline. Every command writes its outputs into --output-dir;
tabular results go to CSV by default (or JSON with --format json), summary
results to JSON. All numeric output is full double precision with
locale-independent decimal points; files are written atomically (temp file
plus rename). Exit codes: 0 success, 1 analysis failure, 2 input or
configuration error.

Plot rendering is out of scope by design: outputs are plot-ready tables.

The pipeline writes a manifest listing the echoed configuration, library
versions, the seed, per-analysis status and every output file with a sha256
checksum. Everything in a run directory is byte-deterministic for a fixed
seed and any worker count, except the manifest's "timings_ms" section, which
records wall-clock durations and necessarily varies between runs.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import date, timedelta
from pathlib import Path

import numpy as np
import scipy

import mfluct
from mfluct.castaing import FitError, fit_lambda2_pdf, lambda2_from_kurtosis
from mfluct.detrend import DetrendConfig, detrended_increments
from mfluct.multiscale import (
    DEFAULT_SCAN_SCALES,
    FitOptions,
    fit_crossover,
    scan_scales,
    sliding_lambda2,
)
from mfluct.series import (
    DataError,
    PriceSeries,
    load_prices,
    log_prices,
    log_returns,
    write_prices,
)
from mfluct.stats import empirical_pdf, split_compare, summary_stats
from mfluct.structure import DEFAULT_Q_VALUES, classify_fractality, structure_functions
from mfluct.surrogates import SurrogateSpec, gen_castaing_increments, generate

__all__ = ["main", "PipelineConfig", "run_pipeline"]

EXIT_OK = 0
EXIT_ANALYSIS = 1
EXIT_CONFIG = 2

DEFAULT_ANALYSES = ("stats", "fit", "scan", "slide", "mfa")


# ---------------------------------------------------------------------------
# deterministic serialization helpers
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    """Full-precision, locale-independent text for one CSV cell."""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, date):
        return value.isoformat()
    return str(value)


def _jsonable(obj):
    """Recursively convert to plain JSON types; non-finite floats become null."""
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, date):
        return obj.isoformat()
    return obj


def _write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    tmp.replace(path)
    return path


def write_json(path: Path, obj) -> Path:
    return _write_text(path, json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n")


def write_table(path: Path, header: list[str], rows: list[list], fmt: str) -> Path:
    """Write rows as CSV, or as a JSON list of row objects with --format json."""
    if fmt == "json":
        path = path.with_suffix(".json")
        return write_json(path, [dict(zip(header, row)) for row in rows])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return _write_text(path, buf.getvalue())


def synthetic_dates(n: int, start: date = date(2000, 1, 3)) -> tuple[date, ...]:
    """Deterministic weekday calendar for surrogate price files."""
    out, d = [], start
    while len(out) < n:
        if d.weekday() < 5:
            out.append(d)
        d += timedelta(days=1)
    return tuple(out)


def _load_events(path: str | Path) -> dict[date, str]:
    events: dict[date, str] = {}
    for i, line in enumerate(Path(path).read_text().splitlines()):
        if not line.strip():
            continue
        first, _, rest = line.partition(",")
        try:
            d = date.fromisoformat(first.strip())
        except ValueError:
            if i == 0:
                continue  # header row
            raise DataError(f"{path}: bad event date at line {i + 1}: {first!r}") from None
        events[d] = rest.strip()
    return events


# ---------------------------------------------------------------------------
# analysis output builders (shared by subcommands and the pipeline)
# ---------------------------------------------------------------------------

def _stats_summary_dict(st) -> dict:
    return {"mean": st.mean, "std": st.std, "skewness": st.skewness,
            "kurtosis": st.kurtosis, "n": st.n}


def _pdf_rows(pdf) -> list[list]:
    return [[c, d, n] for c, d, n in zip(pdf.bin_centers, pdf.densities, pdf.counts)]


def _run_returns(p: PriceSeries, scale: int, out: Path, fmt: str) -> list[Path]:
    r = log_returns(p, scale)
    rows = []
    for t, v in enumerate(r.values):
        d = r.source_dates[t] if r.source_dates else ""
        rows.append([t, d, v])
    return [write_table(out / "returns.csv", ["t", "date", "log_return"], rows, fmt)]


def _run_detrend(p: PriceSeries, scale: int, out: Path, fmt: str) -> list[Path]:
    incr = detrended_increments(log_prices(p), DetrendConfig(scale_s=scale))
    rows = [[int(t) // scale + 1, int(t), v]
            for t, v in zip(incr.t_indices, incr.values)]
    return [write_table(out / "increments.csv", ["k", "t", "increment"], rows, fmt)]


def _run_fit(p: PriceSeries, scale: int, options: FitOptions, out: Path) -> list[Path]:
    incr = detrended_increments(log_prices(p), DetrendConfig(scale_s=scale))
    if options.method == "pdf":
        fit = fit_lambda2_pdf(incr, bins=options.bins, quad_order=options.quad_order)
        payload = {
            "lambda2": fit.params.lambda2,
            "sigma0": fit.params.sigma0,
            "method": fit.method,
            "residual": fit.residual,
            "n_samples": fit.n_samples,
            "quad_order": fit.quad_order,
            "scale_s": scale,
        }
    else:
        st = summary_stats(incr.values)
        lam2 = lambda2_from_kurtosis(st.kurtosis)
        payload = {
            "lambda2": lam2,
            "sigma0": math.exp(-lam2) * st.std if math.isfinite(lam2) else None,
            "method": "kurtosis-moment",
            "residual": None,
            "n_samples": st.n,
            "quad_order": None,
            "scale_s": scale,
            "flag": "sub-gaussian" if math.isnan(lam2) else "",
        }
    return [write_json(out / "fit.json", payload)]


def _run_scan(p: PriceSeries, scales, options: FitOptions, out: Path, fmt: str) -> list[Path]:
    scan = scan_scales(p, scales, options)
    rows = [[int(s), l2, sg, rs, fl]
            for s, l2, sg, rs, fl in zip(scan.scales, scan.lambda2s, scan.sigmas,
                                         scan.fit_residuals, scan.flags)]
    files = [write_table(out / "scan.csv", ["s", "lambda2", "sigma", "residual", "flag"],
                         rows, fmt)]
    crossover = {}
    for quantity in ("lambda2", "sigma"):
        try:
            c = fit_crossover(scan, quantity)
            crossover[quantity] = {
                "breakpoint_scale": c.breakpoint_scale,
                "left_slope": c.left_slope,
                "right_slope": c.right_slope,
                "sse": c.sse,
                "sse_single": c.sse_single,
                "weak": c.weak,
            }
        except DataError as exc:
            crossover[quantity] = {"skipped": str(exc)}
    files.append(write_json(out / "crossover.json", crossover))
    return files


def _run_slide(p: PriceSeries, scale: int, window: int, step: int,
               options: FitOptions, events: dict[date, str] | None,
               out: Path, fmt: str) -> list[Path]:
    wl = sliding_lambda2(p, scale, window, step, options)
    header = ["center_index", "center_date", "lambda2", "flag"]
    if events is not None:
        header.append("event")
    rows = []
    for c, l2, fl in zip(wl.centers, wl.lambda2s, wl.flags):
        d = p.dates[int(c)] if p.dates else ""
        row = [int(c), d, l2, fl]
        if events is not None:
            row.append(events.get(d, "") if p.dates else "")
        rows.append(row)
    return [write_table(out / "slide.csv", header, rows, fmt)]


def _run_mfa(p: PriceSeries, scale: int, q_values, lags, out: Path, fmt: str) -> list[Path]:
    incr = detrended_increments(log_prices(p), DetrendConfig(scale_s=scale))
    scan = structure_functions(incr, q_values=q_values, lags=lags)
    rows = []
    for qi, q in enumerate(scan.q_values):
        for li, lag in enumerate(scan.lags):
            rows.append([float(q), int(lag), scan.moments[qi, li],
                         int(scan.included[qi, li])])
    files = [write_table(out / "mfa_moments.csv", ["q", "l", "m", "included_flag"],
                         rows, fmt)]
    files.append(write_json(out / "mfa_summary.json", {
        "q_values": scan.q_values,
        "xi": scan.xi,
        "xi_stderr": scan.xi_stderr,
        "hurst_H": scan.hurst_H,
        "nonlinearity": scan.nonlinearity,
        "label": classify_fractality(scan),
        "fit_lag_range": list(scan.fit_lag_range),
        "scale_s": scale,
    }))
    return files


def _run_stats(p: PriceSeries, out: Path, fmt: str, bins: int) -> list[Path]:
    r = log_returns(p, 1)
    st = summary_stats(r)
    files = [write_json(out / "stats.json", {**_stats_summary_dict(st), "scale_s": 1})]
    if st.n >= 100 and st.std > 0:
        pdf = empirical_pdf(r.values, bins=bins, standardize=True)
        files.append(write_table(out / "pdf.csv", ["bin_center", "density", "count"],
                                 _pdf_rows(pdf), fmt))
    return files


def _run_split(p: PriceSeries, split_at, out: Path, fmt: str) -> list[Path]:
    r = log_returns(p, 1)
    report = split_compare(r, split_at)
    files = [write_json(out / "split.json", {
        "t_star_index": report.t_star_index,
        "t_star_date": report.t_star_date,
        "excluded_count": report.excluded_count,
        "before": _stats_summary_dict(report.before),
        "after": _stats_summary_dict(report.after),
    })]
    for name, pdf in (("before_pdf", report.before_pdf), ("after_pdf", report.after_pdf)):
        if pdf is not None:
            files.append(write_table(out / f"{name}.csv",
                                     ["bin_center", "density", "count"],
                                     _pdf_rows(pdf), fmt))
    return files


# ---------------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PipelineConfig:
    """Everything one reproducible run needs; echoed into the manifest."""

    out_dir: str
    input_path: str | None = None
    date_column: str = "date"
    price_column: str = "price"
    no_dates: bool = False
    surrogate: SurrogateSpec | None = None
    analyses: tuple[str, ...] = DEFAULT_ANALYSES
    scale_s: int = 4
    scales: tuple[int, ...] = DEFAULT_SCAN_SCALES
    window_len: int = 150
    step: int = 5
    bins: int = 61
    quad_order: int = 40
    fit_method: str | None = None  # None resolves per analysis
    q_values: tuple[float, ...] = DEFAULT_Q_VALUES
    lags: tuple[int, ...] | None = None
    split_at: str | None = None
    events_path: str | None = None
    fmt: str = "csv"
    workers: int = 1
    seed: int = 0


@dataclass
class RunResult:
    out_dir: Path
    manifest: dict
    failed: list[str] = field(default_factory=list)


def _fit_options(config: PipelineConfig, default_method: str) -> FitOptions:
    return FitOptions(method=config.fit_method or default_method,
                      bins=config.bins, quad_order=config.quad_order)


def _resolve_prices(config: PipelineConfig, out: Path) -> PriceSeries:
    if (config.input_path is None) == (config.surrogate is None):
        raise DataError("pipeline needs exactly one of an input file or a surrogate spec")
    if config.input_path is not None:
        return load_prices(config.input_path, config.date_column,
                           config.price_column, config.no_dates)
    # surrogates are written to disk and re-ingested so they flow through
    # the exact same path as real data
    prices, _ = _surrogate_prices(config.surrogate)
    path = write_prices(prices, out / "surrogate_prices.csv")
    return load_prices(path, no_dates=prices.dates is None)


def _surrogate_prices(spec: SurrogateSpec) -> tuple[PriceSeries, dict]:
    """Price series for any surrogate kind, plus metadata for the manifest."""
    meta: dict = {"kind": spec.kind, "n": spec.n, "seed": spec.seed}
    if spec.kind == "castaing-increments":
        # increments are interpreted as daily log-price steps
        steps = gen_castaing_increments(spec)
        log_p = np.concatenate([[0.0], np.cumsum(steps)])
        prices = PriceSeries(values=np.exp(log_p), dates=synthetic_dates(spec.n + 1),
                             label=f"castaing-walk(seed={spec.seed})")
        return prices, meta
    result = generate(spec)
    if spec.kind == "two-regime":
        meta["split_index"] = result.split_index
        base = result.prices
    else:
        base = result
    prices = PriceSeries(values=base.values, dates=synthetic_dates(len(base)),
                         label=base.label)
    return prices, meta


def run_pipeline(config: PipelineConfig) -> RunResult:
    """Run the selected analyses, then write the manifest last.

    Independent analyses may run in parallel (config.workers); each one
    writes only its own files, so outputs are identical for any worker
    count. A failed analysis is recorded in the manifest and leaves the
    others untouched.
    """
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    analyses = tuple(config.analyses)
    if config.split_at is not None and "split" not in analyses:
        analyses = analyses + ("split",)
    known = {"stats", "fit", "scan", "slide", "mfa", "split", "returns", "detrend"}
    unknown = [a for a in analyses if a not in known]
    if unknown:
        raise DataError(f"unknown analyses requested: {unknown}")
    if "split" in analyses and config.split_at is None:
        raise DataError("split analysis needs --split-date")

    prices = _resolve_prices(config, out)
    events = _load_events(config.events_path) if config.events_path else None

    def task(name: str):
        if name == "stats":
            return _run_stats(prices, out, config.fmt, config.bins)
        if name == "fit":
            return _run_fit(prices, config.scale_s, _fit_options(config, "pdf"), out)
        if name == "scan":
            return _run_scan(prices, config.scales, _fit_options(config, "pdf"),
                             out, config.fmt)
        if name == "slide":
            return _run_slide(prices, config.scale_s, config.window_len, config.step,
                              _fit_options(config, "kurtosis"), events, out, config.fmt)
        if name == "mfa":
            return _run_mfa(prices, config.scale_s, config.q_values, config.lags,
                            out, config.fmt)
        if name == "split":
            return _run_split(prices, config.split_at, out, config.fmt)
        if name == "returns":
            return _run_returns(prices, config.scale_s, out, config.fmt)
        return _run_detrend(prices, config.scale_s, out, config.fmt)

    statuses: dict[str, dict] = {}
    timings: dict[str, float] = {}

    def run_one(name: str):
        t0 = time.perf_counter()
        try:
            files = task(name)
            return name, time.perf_counter() - t0, files, None
        except Exception as exc:  # recorded per analysis, never aborts the run
            return name, time.perf_counter() - t0, [], f"{type(exc).__name__}: {exc}"

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(run_one, analyses))
    else:
        results = [run_one(name) for name in analyses]

    failed = []
    for name, dt, files, error in results:
        timings[name] = round(dt * 1000.0, 3)
        statuses[name] = {"status": "ok" if error is None else "failed",
                          "files": sorted(f.name for f in files)}
        if error is not None:
            statuses[name]["error"] = error
            failed.append(name)

    checksums = {}
    for f in sorted(out.rglob("*")):
        if f.is_file() and f.name != "manifest.json":
            checksums[str(f.relative_to(out))] = hashlib.sha256(f.read_bytes()).hexdigest()

    manifest = {
        "config": asdict(config),
        "versions": {
            "python": sys.version.split()[0],
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "mfluct": mfluct.__version__,
        },
        "seed": config.seed,
        "analyses": statuses,
        "files": checksums,
        "timings_ms": timings,
    }
    write_json(out / "manifest.json", manifest)
    return RunResult(out_dir=out, manifest=manifest, failed=failed)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.split(",") if t.strip())


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(t) for t in text.split(",") if t.strip())


def _build_parser() -> argparse.ArgumentParser:
    io = argparse.ArgumentParser(add_help=False)
    io.add_argument("--input", help="price file (header + date,price columns)")
    io.add_argument("--output-dir", default="out", help="directory for outputs")
    io.add_argument("--format", choices=("csv", "json"), default="csv",
                    help="serialization for tabular outputs")
    io.add_argument("--no-dates", action="store_true",
                    help="input has no date column; rows are the clock")
    io.add_argument("--date-column", default="date")
    io.add_argument("--price-column", default="price")

    fit = argparse.ArgumentParser(add_help=False)
    fit.add_argument("--quad-order", type=int, default=40)
    fit.add_argument("--bins", type=int, default=61)
    fit.add_argument("--fit-method", choices=("pdf", "kurtosis"), default=None,
                     help="lambda2 estimator (default: pdf for fit/scan, kurtosis for slide)")

    sur = argparse.ArgumentParser(add_help=False)
    sur.add_argument("--kind", choices=("castaing-increments", "gaussian-walk", "two-regime"),
                     default="gaussian-walk")
    sur.add_argument("--n", type=int, default=10000)
    sur.add_argument("--lambda2", type=float, default=0.0)
    sur.add_argument("--lambda2-a", type=float, default=None)
    sur.add_argument("--lambda2-b", type=float, default=None)
    sur.add_argument("--split-fraction", type=float, default=0.5)
    sur.add_argument("--sigma0", type=float, default=0.01)
    sur.add_argument("--seed", type=int, default=0)
    sur.add_argument("--vol-block", type=int, default=None,
                     help="hold the log-scale factor constant over blocks of this many days")

    parser = argparse.ArgumentParser(
        prog="mfluct",
        description="Multiscale non-Gaussian fluctuation analysis of daily price series",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("ingest", parents=[io], help="validate a price file and echo it")

    pr = sub.add_parser("returns", parents=[io], help="log returns at a scale")
    pr.add_argument("--scale", type=int, default=1)

    pd_ = sub.add_parser("detrend", parents=[io], help="detrended increments at a scale")
    pd_.add_argument("--scale", type=int, default=4)

    pf = sub.add_parser("fit", parents=[io, fit], help="fit lambda2 at one scale")
    pf.add_argument("--scale", type=int, default=4)

    ps = sub.add_parser("scan", parents=[io, fit], help="lambda2 and sigma across scales")
    ps.add_argument("--scales", type=_int_list,
                    default=DEFAULT_SCAN_SCALES, help="comma-separated scales")

    pl = sub.add_parser("slide", parents=[io, fit], help="sliding-window lambda2")
    pl.add_argument("--scale", type=int, default=4)
    pl.add_argument("--window", type=int, default=150)
    pl.add_argument("--step", type=int, default=5)
    pl.add_argument("--events", default=None, help="date,label annotation file")

    pm = sub.add_parser("mfa", parents=[io], help="structure functions and fractality label")
    pm.add_argument("--scale", type=int, default=4)
    pm.add_argument("--q-values", type=_float_list, default=DEFAULT_Q_VALUES)
    pm.add_argument("--lags", type=_int_list, default=None)

    pt = sub.add_parser("stats", parents=[io], help="summary stats, pdf, optional split")
    pt.add_argument("--split-date", default=None,
                    help="ISO date or integer price index for before/after comparison")
    pt.add_argument("--bins", type=int, default=61)

    pg = sub.add_parser("surrogate", parents=[io, sur],
                        help="write a synthetic series as a standard price CSV")

    pp = sub.add_parser("pipeline", parents=[io, fit, sur],
                        help="run several analyses into one directory with a manifest")
    pp.add_argument("--analyses", default=",".join(DEFAULT_ANALYSES),
                    help="comma-separated subset of stats,fit,scan,slide,mfa,returns,detrend")
    pp.add_argument("--scale", type=int, default=4)
    pp.add_argument("--scales", type=_int_list, default=DEFAULT_SCAN_SCALES)
    pp.add_argument("--window", type=int, default=150)
    pp.add_argument("--step", type=int, default=5)
    pp.add_argument("--q-values", type=_float_list, default=DEFAULT_Q_VALUES)
    pp.add_argument("--lags", type=_int_list, default=None)
    pp.add_argument("--split-date", default=None)
    pp.add_argument("--events", default=None)
    pp.add_argument("--workers", type=int, default=1)
    pp.add_argument("--surrogate", action="store_true",
                    help="analyze a generated surrogate instead of --input")
    return parser


def _load_input(args) -> PriceSeries:
    if not args.input:
        raise DataError("--input is required for this command")
    return load_prices(args.input, args.date_column, args.price_column, args.no_dates)


def _surrogate_spec(args) -> SurrogateSpec:
    kwargs = dict(kind=args.kind, n=args.n, lambda2=args.lambda2, sigma0=args.sigma0,
                  seed=args.seed, vol_block_len=args.vol_block)
    if args.kind == "two-regime":
        kwargs.update(lambda2_a=args.lambda2_a, lambda2_b=args.lambda2_b,
                      split_fraction=args.split_fraction)
    return SurrogateSpec(**kwargs)


def _split_arg(text: str):
    try:
        return int(text)
    except ValueError:
        return text  # ISO date string, resolved downstream


def _dispatch(args) -> int:
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    cmd = args.command

    if cmd == "ingest":
        p = _load_input(args)
        write_prices(p, out / "prices.csv")
        print(f"validated {len(p)} rows -> {out / 'prices.csv'}")
        return EXIT_OK

    if cmd == "surrogate":
        spec = _surrogate_spec(args)
        prices, meta = _surrogate_prices(spec)
        write_prices(prices, out / "prices.csv")
        write_json(out / "surrogate.json", {**meta, "spec": asdict(spec)})
        print(f"wrote {len(prices)} surrogate prices -> {out / 'prices.csv'}")
        return EXIT_OK

    if cmd == "pipeline":
        config = PipelineConfig(
            out_dir=args.output_dir,
            input_path=None if args.surrogate else args.input,
            date_column=args.date_column,
            price_column=args.price_column,
            no_dates=args.no_dates,
            surrogate=_surrogate_spec(args) if args.surrogate else None,
            analyses=tuple(a.strip() for a in args.analyses.split(",") if a.strip()),
            scale_s=args.scale,
            scales=tuple(args.scales),
            window_len=args.window,
            step=args.step,
            bins=args.bins,
            quad_order=args.quad_order,
            fit_method=args.fit_method,
            q_values=tuple(args.q_values),
            lags=tuple(args.lags) if args.lags else None,
            split_at=args.split_date,
            events_path=args.events,
            fmt=args.format,
            workers=args.workers,
            seed=args.seed,
        )
        result = run_pipeline(config)
        for name, info in result.manifest["analyses"].items():
            line = f"{name}: {info['status']}"
            if info["status"] != "ok":
                line += f" ({info['error']})"
            print(line)
        return EXIT_ANALYSIS if result.failed else EXIT_OK

    p = _load_input(args)
    if cmd == "returns":
        _run_returns(p, args.scale, out, args.format)
    elif cmd == "detrend":
        _run_detrend(p, args.scale, out, args.format)
    elif cmd == "fit":
        options = FitOptions(method=args.fit_method or "pdf",
                             bins=args.bins, quad_order=args.quad_order)
        _run_fit(p, args.scale, options, out)
    elif cmd == "scan":
        options = FitOptions(method=args.fit_method or "pdf",
                             bins=args.bins, quad_order=args.quad_order)
        _run_scan(p, args.scales, options, out, args.format)
    elif cmd == "slide":
        options = FitOptions(method=args.fit_method or "kurtosis",
                             bins=args.bins, quad_order=args.quad_order)
        events = _load_events(args.events) if args.events else None
        _run_slide(p, args.scale, args.window, args.step, options, events, out, args.format)
    elif cmd == "mfa":
        _run_mfa(p, args.scale, tuple(args.q_values),
                 tuple(args.lags) if args.lags else None, out, args.format)
    elif cmd == "stats":
        _run_stats(p, out, args.format, args.bins)
        if args.split_date is not None:
            _run_split(p, _split_arg(args.split_date), out, args.format)
    else:  # pragma: no cover - argparse enforces the choices
        raise DataError(f"unknown command {cmd!r}")
    print(f"wrote outputs -> {out}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FitError as exc:
        print(f"fit failed: {exc} (kurtosis fallback {exc.fallback_lambda2!r})",
              file=sys.stderr)
        return EXIT_ANALYSIS


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: analyze, mp, surrogate, compare, align.

Option precedence is flags > config file > defaults.  The default window
set is the bundled ``paper-2008`` preset (2008 crisis: before/during/
after) with a removal threshold of 0.30; a date is dropped when the
fraction of missing markets is greater than or equal to the threshold.
Text tables print 6 decimals; JSON reports keep full float precision.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analysis, ingest, rmt
from .errors import ConfigError, PipelineError, RmtcorrError

OUT_ENV_VAR = "RMTCORR_OUT"


@dataclass
class RunConfig:
    input: str | None = None
    windows: list[ingest.WindowSpec] = field(default_factory=list)
    theta: float = ingest.DEFAULT_THETA
    bin_width: float = 0.05
    top_k: int = 20
    ipr_note: bool = True
    out: str = "."
    parallel: int = 1
    surrogate_n: int = 100
    surrogate_l: int = 500
    surrogate_seeds: int = 100
    surrogate_base_seed: int = 0

    def validate(self):
        if not 0.0 <= self.theta <= 1.0:
            raise ConfigError(f"theta must be in [0, 1], got {self.theta}")
        if self.bin_width <= 0.0:
            raise ConfigError(f"bin width must be positive, got {self.bin_width}")
        if self.top_k < 1:
            raise ConfigError(f"top-k must be >= 1, got {self.top_k}")
        if self.parallel < 1:
            raise ConfigError(f"parallel must be >= 1, got {self.parallel}")
        if not self.windows:
            raise ConfigError("no analysis windows configured")


def _default_out() -> str:
    return os.environ.get(OUT_ENV_VAR, ".")


def load_config(path: str) -> dict:
    """Read a config file: either a bare window list or a settings object."""
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config '{path}': {exc}") from exc
    if isinstance(data, list):
        return {"windows": data}
    if not isinstance(data, dict):
        raise ConfigError(f"config '{path}' must be a JSON object or window list")
    return data


def _merge_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(out=_default_out())
    file_cfg = load_config(args.config) if getattr(args, "config", None) else {}

    if "windows" in file_cfg:
        cfg.windows = ingest.parse_windows(file_cfg["windows"], where=args.config)
    else:
        cfg.windows = ingest.default_windows()
    for key in ("theta", "bin_width", "top_k", "ipr_note", "out", "parallel", "input"):
        if key in file_cfg:
            setattr(cfg, key, file_cfg[key])
    sur = file_cfg.get("surrogate", {})
    for src, dst in (("n", "surrogate_n"), ("l", "surrogate_l"),
                     ("seeds", "surrogate_seeds"), ("base_seed", "surrogate_base_seed")):
        if src in sur:
            setattr(cfg, dst, sur[src])

    for flag, key in (("input", "input"), ("theta", "theta"),
                      ("bin_width", "bin_width"), ("top_k", "top_k"),
                      ("out", "out"), ("parallel", "parallel")):
        value = getattr(args, flag, None)
        if value is not None:
            setattr(cfg, key, value)
    if getattr(args, "no_ipr_note", False):
        cfg.ipr_note = False
    cfg.validate()
    return cfg


def _slug(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "_", name.strip()) or "window"


def _atomic_write(path: Path, text: str):
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _table(rows: list[list[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join(
        "  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
        for row in rows
    )


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _csv_text(header: list[str], rows: list[list[str]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _write_window_files(report: analysis.WindowReport, out_dir: Path, ipr_note: bool):
    slug = _slug(report.window.name)
    doc = analysis.report_to_dict(report, ipr_note=ipr_note)
    _atomic_write(out_dir / f"{slug}_report.json",
                  json.dumps(doc, indent=2) + "\n")

    _atomic_write(out_dir / f"{slug}_volatility.csv", _csv_text(
        ["ticker", "sigma"],
        [[t, _fmt(s)] for t, s in zip(report.tickers, report.volatilities)],
    ))
    stats = report.coefficients
    _atomic_write(out_dir / f"{slug}_coefficient_hist.csv", _csv_text(
        ["bin_center", "density"],
        [[_fmt(c), _fmt(d)] for c, d in zip(stats.bin_centers, stats.densities)],
    ))

    model = report.model
    zones = [
        "below" if v < model.lam_minus else "above" if v > model.lam_plus else "bulk"
        for v in report.spectrum.eigenvalues
    ]
    _atomic_write(out_dir / f"{slug}_eigenvalues.csv", _csv_text(
        ["rank", "eigenvalue", "zone"],
        [[str(k + 1), _fmt(v), z]
         for k, (v, z) in enumerate(zip(report.spectrum.eigenvalues, zones))],
    ))
    grid, dens = rmt.density_curve(model)
    _atomic_write(out_dir / f"{slug}_mp_density.csv", _csv_text(
        ["lambda", "density"],
        [[_fmt(x), _fmt(d)] for x, d in zip(grid, dens)],
    ))
    for rank, pairs in sorted(report.top_components.items()):
        _atomic_write(out_dir / f"{slug}_eigenvector_rank{rank}.csv", _csv_text(
            ["ticker", "component"],
            [[t, _fmt(c)] for t, c in pairs],
        ))
    iprs = report.ipr_series
    _atomic_write(out_dir / f"{slug}_ipr.csv", _csv_text(
        ["rank", "eigenvalue", "ipr", "participation"],
        [[str(k + 1), _fmt(lam), _fmt(i), _fmt(p)]
         for k, (lam, i, p) in enumerate(zip(iprs.eigenvalues, iprs.ipr,
                                             iprs.participation))],
    ))


def cmd_analyze(args: argparse.Namespace) -> int:
    cfg = _merge_config(args)
    if not cfg.input:
        raise ConfigError("no input file given (use --input or the config file)")
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    panel = ingest.load_prices(cfg.input)
    aligned = ingest.align(panel, theta=cfg.theta)

    def run(window: ingest.WindowSpec):
        return analysis.build_report(window, aligned,
                                     bin_width=cfg.bin_width, top_k=cfg.top_k)

    results: list[analysis.WindowReport | Exception] = []
    if cfg.parallel > 1:
        with ThreadPoolExecutor(max_workers=cfg.parallel) as pool:
            futures = [pool.submit(run, w) for w in cfg.windows]
            for future in futures:
                try:
                    results.append(future.result())
                except PipelineError as exc:
                    results.append(exc)
    else:
        for window in cfg.windows:
            try:
                results.append(run(window))
            except PipelineError as exc:
                results.append(exc)

    rows = [["window", "N", "T", "Q", "lambda-", "lambda+", "lambda_max",
             "mean_corr", "n_below", "n_above"]]
    failures = 0
    for window, result in zip(cfg.windows, results):
        if isinstance(result, Exception):
            failures += 1
            print(f"error [{result.cause_module}] {result}", file=sys.stderr)
            continue
        _write_window_files(result, out_dir, cfg.ipr_note)
        below, _, above = result.classification.counts
        rows.append([
            result.window.name, str(len(result.tickers)), str(result.n_returns),
            _fmt(result.q), _fmt(result.model.lam_minus), _fmt(result.model.lam_plus),
            _fmt(result.spectrum.eigenvalues[0]), _fmt(result.coefficients.mean),
            str(below), str(above),
        ])
    if len(rows) > 1:
        print(_table(rows))
    return 1 if failures else 0


def cmd_mp(args: argparse.Namespace) -> int:
    model = rmt.mp_bounds(args.q)
    out_dir = Path(args.out if args.out is not None else _default_out())
    out_dir.mkdir(parents=True, exist_ok=True)
    grid, dens = rmt.density_curve(model, points=args.points)
    path = out_dir / f"mp_density_q{args.q:g}.csv"
    _atomic_write(path, _csv_text(
        ["lambda", "density"],
        [[_fmt(x), _fmt(d)] for x, d in zip(grid, dens)],
    ))
    print(f"Q = {_fmt(model.q)}")
    print(f"lambda- = {_fmt(model.lam_minus)}")
    print(f"lambda+ = {_fmt(model.lam_plus)}")
    print(f"density curve: {path}")
    return 0


def cmd_surrogate(args: argparse.Namespace) -> int:
    cfg = _merge_config(args) if args.config else None
    n = args.n if args.n is not None else (cfg.surrogate_n if cfg else 100)
    l = args.l if args.l is not None else (cfg.surrogate_l if cfg else 500)
    seeds = args.seeds if args.seeds is not None else (cfg.surrogate_seeds if cfg else 100)
    base = args.base_seed if args.base_seed is not None else (
        cfg.surrogate_base_seed if cfg else 0)
    bin_width = args.bin_width if args.bin_width is not None else (
        cfg.bin_width if cfg else 0.05)
    out_dir = Path(args.out if args.out is not None else
                   (cfg.out if cfg else _default_out()))
    out_dir.mkdir(parents=True, exist_ok=True)

    spectra = rmt.surrogate_ensemble(n, l, seeds, base)
    pooled = np.concatenate([sd.eigenvalues for sd in spectra])
    model = rmt.mp_bounds(l / n)
    comparison = rmt.histogram_vs_density(pooled, model, bin_width=bin_width)

    _atomic_write(out_dir / "surrogate_hist.csv", _csv_text(
        ["bin_center", "empirical_density", "analytic_density"],
        [[_fmt(c), _fmt(e), _fmt(a)]
         for c, e, a in zip(comparison.bin_centers,
                            comparison.empirical_density,
                            comparison.analytic_density)],
    ))
    grid, dens = rmt.density_curve(model)
    _atomic_write(out_dir / "surrogate_density.csv", _csv_text(
        ["lambda", "density"],
        [[_fmt(x), _fmt(d)] for x, d in zip(grid, dens)],
    ))

    inside = sum(rmt.classify_spectrum(sd, model).counts[1] for sd in spectra)
    print(f"N={n} L={l} seeds={seeds} base-seed={base}")
    print(f"Q = {_fmt(model.q)}")
    print(f"lambda- = {_fmt(model.lam_minus)}")
    print(f"lambda+ = {_fmt(model.lam_plus)}")
    print(f"L1 distance = {_fmt(comparison.l1_distance)}")
    print(f"bulk fraction = {_fmt(inside / pooled.size)}")
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    def load(path: str) -> analysis.WindowReport:
        try:
            with open(path, encoding="utf-8") as handle:
                return analysis.report_from_dict(json.load(handle))
        except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
            raise ConfigError(f"cannot read report '{path}': {exc}") from exc

    rep_a, rep_b = load(args.a), load(args.b)
    comparison = analysis.compare_vectors(rep_a.spectrum, rep_b.spectrum,
                                          rank=args.rank, floor=args.floor)
    out_dir = Path(args.out if args.out is not None else _default_out())
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / (
        f"compare_{_slug(rep_a.window.name)}_vs_{_slug(rep_b.window.name)}"
        f"_rank{args.rank}.csv"
    )
    _atomic_write(path, _csv_text(
        ["ticker", "component_a", "component_b", "status"],
        [[t, _fmt(a), _fmt(b), s]
         for t, a, b, s in zip(comparison.tickers, comparison.components_a,
                               comparison.components_b, comparison.status)],
    ))
    print(f"rank {args.rank}: {comparison.flipped_count}/{len(comparison.tickers)} "
          f"flips, fraction = {_fmt(comparison.flipped_fraction)}")
    print(f"table: {path}")
    return 0


def cmd_align(args: argparse.Namespace) -> int:
    panel = ingest.load_prices(args.input)
    theta = args.theta if args.theta is not None else ingest.DEFAULT_THETA
    aligned = ingest.align(panel, theta=theta)
    output = Path(args.output)
    if output.parent != Path("."):
        output.parent.mkdir(parents=True, exist_ok=True)
    ingest.write_panel(aligned, output)
    removed = panel.n_dates - aligned.n_dates
    print(f"kept {aligned.n_dates} of {panel.n_dates} dates "
          f"({removed} removed), forward-filled {len(aligned.fill_log)} cells")
    print(f"aligned panel: {output}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rmtcorr",
        description="Random-matrix analysis of cross-correlations in "
                    "financial return panels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="run the full pipeline per window")
    p.add_argument("--input", help="price table (CSV: date,<ticker>,...)")
    p.add_argument("--config", help="JSON window list or settings object")
    p.add_argument("--out", help=f"output directory (default ${OUT_ENV_VAR} or .)")
    p.add_argument("--theta", type=float,
                   help="remove a date when missing fraction >= theta (default 0.30)")
    p.add_argument("--bin-width", dest="bin_width", type=float,
                   help="coefficient histogram bin width (default 0.05)")
    p.add_argument("--top-k", dest="top_k", type=int,
                   help="components per eigenvector table (default 20)")
    p.add_argument("--parallel", type=int, help="analyze windows concurrently")
    p.add_argument("--no-ipr-note", action="store_true",
                   help="omit the IPR definition note from reports")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("mp", help="print null-model bounds and write the density curve")
    p.add_argument("--q", type=float, required=True, help="observation ratio L/N (>= 1)")
    p.add_argument("--points", type=int, default=512)
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_mp)

    p = sub.add_parser("surrogate",
                       help="compare seeded random-panel spectra with the analytic density")
    p.add_argument("--n", type=int, help="number of series (default 100)")
    p.add_argument("--l", type=int, help="observations per series (default 500)")
    p.add_argument("--seeds", type=int, help="number of seeded panels (default 100)")
    p.add_argument("--base-seed", dest="base_seed", type=int,
                   help="first seed; panels use base, base+1, ... (default 0)")
    p.add_argument("--bin-width", dest="bin_width", type=float)
    p.add_argument("--config", help="settings object with a 'surrogate' section")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_surrogate)

    p = sub.add_parser("compare", help="sign-flip table between two window reports")
    p.add_argument("--a", required=True, help="first report JSON")
    p.add_argument("--b", required=True, help="second report JSON")
    p.add_argument("--rank", type=int, required=True, help="eigenvector rank (1-based)")
    p.add_argument("--floor", type=float, default=0.0,
                   help="components below this magnitude are indeterminate")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("align", help="apply calendar filtering and forward fill")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--theta", type=float)
    p.set_defaults(func=cmd_align)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PipelineError as exc:
        print(f"error [{exc.cause_module}] {exc}", file=sys.stderr)
        return 1
    except RmtcorrError as exc:
        print(f"error [{exc.module}] {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line pipeline emitting tables and plot-ready records.

Subcommands:

* ``decompose`` - per bucket: PCA/ICA weight matrices, component series,
  per-component stats, and the stacked PC/IC correlation matrix;
* ``portfolio`` - Kelly (on PCs) vs fat-tailed (on ICs) portfolios, both
  scaled to the target volatility, with a side-by-side metric table;
* ``clt``       - the Monte Carlo scaling experiment as a flat record table;
* ``report``    - end-to-end run emitting one long-format metric file.

Outputs are deterministic for fixed inputs, flags and seed: files are
written atomically, floats with 17 significant digits (CSV) or shortest
round-trip repr (JSON), and no timestamps are embedded.  Exit codes:
0 success, 1 input/config error, 2 numerical failure with partial outputs.
"""

import argparse
import csv
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .cltharness import (
    CltExperimentConfig,
    Laplace,
    StochasticVol,
    StudentT,
    UniformGaussianMix,
    run_clt_experiment,
)
from .data import bucketize, compute_returns, load_bucket_specs, load_prices
from .errors import TailfolioError
from .ica import IcaConfig, ica_decompose, pc_ic_correlation
from .metrics import metric_report
from .pca import pca_decompose
from .portfolio import (
    Construction,
    fat_tailed_weights,
    kelly_weights,
    portfolio_from_weights,
    scale_to_target_vol,
)

FAMILY_FLAGS = {
    "laplace": Laplace,
    "student-t": StudentT,
    "uniform-mix": UniformGaussianMix,
    "stochastic-vol": StochasticVol,
}


# ---------------------------------------------------------------------------
# Serialization helpers
# ---------------------------------------------------------------------------


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _write_table(out_dir: Path, stem: str, fmt: str, header, rows) -> Path:
    """Write one table as CSV (17-significant-digit floats) or JSON records."""
    path = out_dir / f"{stem}.{fmt}"
    if fmt == "csv":
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(_fmt(v) for v in row))
        _atomic_write(path, "\n".join(lines) + "\n")
    else:
        records = []
        for row in rows:
            record = {}
            for key, value in zip(header, row):
                if isinstance(value, float) and not math.isfinite(value):
                    value = None
                record[key] = value
            records.append(record)
        _atomic_write(path, json.dumps(records, indent=1) + "\n")
    return path


# ---------------------------------------------------------------------------
# Shared pipeline pieces
# ---------------------------------------------------------------------------


def _derive_seed(master: int, index: int) -> int:
    return int(np.random.SeedSequence([master, index]).generate_state(1, np.uint64)[0] >> 1)


def _bucket_panels(args):
    """Load the price file and yield (label, dates, tickers, values) buckets."""
    panel = load_prices(args.input)
    if args.buckets:
        specs = load_bucket_specs(args.buckets)
        returns = bucketize(panel, specs)
        labeled = [
            (f"bucket{i + 1:02d}", rp) for i, rp in enumerate(returns)
        ]
    else:
        labeled = [("full", compute_returns(panel))]
    out = []
    for label, rp in labeled:
        complete = ~np.any(np.isnan(rp.values), axis=0)
        if not np.any(complete):
            raise TailfolioError(f"{label}: no complete return columns")
        tickers = tuple(t for t, c in zip(rp.tickers, complete) if c)
        out.append((label, rp.dates, tickers, rp.values[:, complete]))
    return out


def _decompose_bucket(values, k, seed, label):
    t, n = values.shape
    k_eff = min(k, n, t - 1, t // 4)
    if k_eff < k:
        print(
            f"warning: {label}: k reduced from {k} to {k_eff} "
            f"(panel is {t}x{n})",
            file=sys.stderr,
        )
    if k_eff < 1:
        raise TailfolioError(f"{label}: panel too small for any component")
    pcs = pca_decompose(values, k_eff)
    k_ica = min(k_eff, pcs.n_components)
    ics = ica_decompose(values, k_ica, IcaConfig(seed=seed))
    for warning in (*pcs.warnings, *ics.warnings):
        print(f"warning: {label}: {warning}", file=sys.stderr)
    return pcs, ics


def _component_labels(prefix, count):
    return [f"{prefix}{i + 1}" for i in range(count)]


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_decompose(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    status = 0
    for index, (label, dates, tickers, values) in enumerate(_bucket_panels(args)):
        try:
            pcs, ics = _decompose_bucket(
                values, args.components, _derive_seed(args.seed, index), label
            )
        except TailfolioError as exc:
            print(f"error: {label}: {exc}", file=sys.stderr)
            status = 2
            continue
        for name, cs in (("pca", pcs), ("ica", ics)):
            prefix = "PC" if name == "pca" else "IC"
            comp_labels = _component_labels(prefix, cs.n_components)
            _write_table(
                out_dir,
                f"{label}_{name}_weights",
                args.format,
                ["component", *tickers],
                [[comp_labels[i], *cs.weights[i]] for i in range(cs.n_components)],
            )
            _write_table(
                out_dir,
                f"{label}_{name}_series",
                args.format,
                ["date", *comp_labels],
                [
                    [dates[t].isoformat(), *cs.series[t]]
                    for t in range(cs.sample_count)
                ],
            )
        stats_rows = []
        for name, cs in (("PCA", pcs), ("ICA", ics)):
            for i, s in enumerate(cs.stats):
                stats_rows.append(
                    [name, i + 1, s.mean, s.volatility, s.excess_kurtosis]
                )
        _write_table(
            out_dir,
            f"{label}_component_stats",
            args.format,
            ["kind", "component", "mean", "volatility", "excess_kurtosis"],
            stats_rows,
        )
        corr = pc_ic_correlation(pcs, ics)
        corr_labels = _component_labels("PC", pcs.n_components) + _component_labels(
            "IC", ics.n_components
        )
        _write_table(
            out_dir,
            f"{label}_pc_ic_correlation",
            args.format,
            ["series", *corr_labels],
            [[corr_labels[i], *corr[i]] for i in range(corr.shape[0])],
        )
    return status


def _build_portfolios(pcs, ics, target_vol):
    kelly = scale_to_target_vol(
        portfolio_from_weights(pcs, kelly_weights(pcs), Construction.KELLY),
        target_vol,
    )
    fat = scale_to_target_vol(
        portfolio_from_weights(ics, fat_tailed_weights(ics), Construction.FAT_TAILED),
        target_vol,
    )
    return kelly, fat


def _portfolio_rows(label, dates, pcs, ics, kelly, fat):
    """The weight/series/metric tables shared by ``portfolio`` and ``report``."""
    weight_rows = [
        ["kelly", f"PC{i + 1}", w] for i, w in enumerate(kelly.weights.values)
    ] + [["fat_tailed", f"IC{i + 1}", w] for i, w in enumerate(fat.weights.values)]
    series_rows = [
        [dates[t].isoformat(), kelly.returns[t], fat.returns[t]]
        for t in range(kelly.returns.size)
    ]
    report_kelly = metric_report(kelly, correlation_vs=("fat_tailed", fat))
    report_fat = metric_report(fat, correlation_vs=("kelly", kelly))
    kelly_flags = ";".join((*pcs.warnings, *kelly.weights.flags)) or "none"
    fat_flags = ";".join((*ics.warnings, *fat.weights.flags)) or "none"
    metric_rows = [
        ["volatility", report_kelly.volatility, report_fat.volatility],
        ["sharpe", report_kelly.sharpe, report_fat.sharpe],
        ["excess_kurtosis", report_kelly.excess_kurtosis, report_fat.excess_kurtosis],
        ["fat_tailed_ratio", report_kelly.fat_tailed_ratio, report_fat.fat_tailed_ratio],
        ["max_drawdown", report_kelly.max_drawdown, report_fat.max_drawdown],
        ["correlation", report_kelly.correlation_vs[1], report_fat.correlation_vs[1]],
        ["flags", kelly_flags, fat_flags],
    ]
    return weight_rows, series_rows, metric_rows


def cmd_portfolio(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    status = 0
    for index, (label, dates, tickers, values) in enumerate(_bucket_panels(args)):
        try:
            pcs, ics = _decompose_bucket(
                values, args.components, _derive_seed(args.seed, index), label
            )
            kelly, fat = _build_portfolios(pcs, ics, args.target_vol)
        except TailfolioError as exc:
            print(f"error: {label}: {exc}", file=sys.stderr)
            status = 2
            continue
        weight_rows, series_rows, metric_rows = _portfolio_rows(
            label, dates, pcs, ics, kelly, fat
        )
        _write_table(
            out_dir,
            f"{label}_portfolio_weights",
            args.format,
            ["portfolio", "component", "weight"],
            weight_rows,
        )
        _write_table(
            out_dir,
            f"{label}_portfolio_series",
            args.format,
            ["date", "kelly", "fat_tailed"],
            series_rows,
        )
        _write_table(
            out_dir,
            f"{label}_portfolio_metrics",
            args.format,
            ["metric", "kelly", "fat_tailed"],
            metric_rows,
        )
    return status


def cmd_clt(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    family_cls = FAMILY_FLAGS[args.family]
    family = family_cls(dof=args.dof) if family_cls is StudentT else family_cls()
    config = CltExperimentConfig(
        n_max=args.n_max,
        n_sources=args.n_sources or args.n_max,
        source_family=family,
        T=args.T,
        trials=args.trials,
        seed=args.seed,
    )
    report = run_clt_experiment(config)

    def ci(arr, i):
        return None if arr is None else float(arr[i])

    scaling_rows = []
    for i, n in enumerate(report.n):
        scaling_rows.append(
            [
                int(n),
                float(report.var_pc_mean[i]),
                ci(report.var_pc_ci, i),
                float(report.var_ic_mean[i]),
                ci(report.var_ic_ci, i),
                float(report.kurt_pc_mean[i]),
                ci(report.kurt_pc_ci, i),
                float(report.kurt_ic_mean[i]),
                ci(report.kurt_ic_ci, i),
            ]
        )
    _write_table(
        out_dir,
        "clt_scaling",
        args.format,
        [
            "n",
            "var_pc",
            "var_pc_ci",
            "var_ic",
            "var_ic_ci",
            "kurt_pc",
            "kurt_pc_ci",
            "kurt_ic",
            "kurt_ic_ci",
        ],
        scaling_rows,
    )
    _write_table(
        out_dir,
        "clt_slopes",
        args.format,
        ["portfolio", "kurtosis_slope", "stderr"],
        [
            ["pc", report.slope_pc, report.slope_pc_se],
            ["ic", report.slope_ic, report.slope_ic_se],
        ],
    )
    _write_table(
        out_dir,
        "clt_summary",
        args.format,
        ["field", "value"],
        [
            ["family", family.name],
            ["n_max", config.n_max],
            ["n_sources", config.n_sources],
            ["T", config.T],
            ["trials", config.trials],
            ["seed", config.seed],
            ["trials_completed", report.trials_completed],
            ["trials_failed", report.trials_failed],
        ],
    )
    records = []
    for i, n in enumerate(report.n):
        for name, mean_arr, ci_arr in (
            ("pc", report.var_pc_mean, report.var_pc_ci),
            ("ic", report.var_ic_mean, report.var_ic_ci),
        ):
            records.append([int(n), name, "variance", float(mean_arr[i])])
            if ci_arr is not None:
                records.append([int(n), name, "variance_ci", float(ci_arr[i])])
        for name, mean_arr, ci_arr in (
            ("pc", report.kurt_pc_mean, report.kurt_pc_ci),
            ("ic", report.kurt_ic_mean, report.kurt_ic_ci),
        ):
            records.append([int(n), name, "excess_kurtosis", float(mean_arr[i])])
            if ci_arr is not None:
                records.append([int(n), name, "excess_kurtosis_ci", float(ci_arr[i])])
    _write_table(
        out_dir,
        "clt_records",
        args.format,
        ["n", "portfolio", "metric", "value"],
        records,
    )
    return 0


def cmd_report(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    status = 0
    for index, (label, dates, tickers, values) in enumerate(_bucket_panels(args)):
        try:
            pcs, ics = _decompose_bucket(
                values, args.components, _derive_seed(args.seed, index), label
            )
            kelly, fat = _build_portfolios(pcs, ics, args.target_vol)
        except TailfolioError as exc:
            print(f"error: {label}: {exc}", file=sys.stderr)
            status = 2
            continue
        _, _, metric_rows = _portfolio_rows(label, dates, pcs, ics, kelly, fat)
        for metric, kelly_value, fat_value in metric_rows:
            rows.append([label, "kelly", metric, kelly_value])
            rows.append([label, "fat_tailed", metric, fat_value])
    _write_table(
        out_dir,
        "report_metrics",
        args.format,
        ["bucket", "portfolio", "metric", "value"],
        rows,
    )
    return status


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _add_io_flags(parser, needs_input=True):
    if needs_input:
        parser.add_argument("--input", required=True, help="price CSV path")
        parser.add_argument("--buckets", help="JSON bucket-spec path")
        parser.add_argument(
            "--components", type=int, default=10, metavar="K", help="components per kind"
        )
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tailfolio",
        description="Factor decomposition and kurtosis-aware portfolio construction",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="extract PCs/ICs per bucket")
    _add_io_flags(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("portfolio", help="build Kelly and fat-tailed portfolios")
    _add_io_flags(p)
    p.add_argument("--target-vol", type=float, default=0.10)
    p.set_defaults(func=cmd_portfolio)

    p = sub.add_parser("clt", help="run the kurtosis-scaling Monte Carlo experiment")
    _add_io_flags(p, needs_input=False)
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--n-sources", type=int, default=0, help="defaults to n-max")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--T", type=int, default=10_000, dest="T")
    p.add_argument("--family", choices=sorted(FAMILY_FLAGS), default="laplace")
    p.add_argument("--dof", type=float, default=6.0, help="student-t degrees of freedom")
    p.set_defaults(func=cmd_clt)

    p = sub.add_parser("report", help="end-to-end pipeline metric report")
    _add_io_flags(p)
    p.add_argument("--target-vol", type=float, default=0.10)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse exits with 2 on usage errors
        return 0 if exc.code in (0, None) else 1
    if getattr(args, "components", 1) < 1:
        print("error: --components must be >= 1", file=sys.stderr)
        return 1
    if getattr(args, "input", None) is not None and not os.path.exists(args.input):
        print(f"error: input path {args.input!r} does not exist", file=sys.stderr)
        return 1
    if getattr(args, "buckets", None) and not os.path.exists(args.buckets):
        print(f"error: bucket-spec path {args.buckets!r} does not exist", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except (TailfolioError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface: run sweeps, summarize records, plot curves."""

import argparse
import sys
from pathlib import Path

from . import bench
from .measures import save_measure


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="srquant",
        description="MSQ vs noise-shaping quantization benchmark for sparse "
                    "spike recovery from Fourier measurements")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a sweep and write records.csv")
    run_p.add_argument("config", nargs="?", type=Path,
                       help="flat key = value config file (defaults apply when omitted)")
    run_p.add_argument("--seed", type=int, default=None, help="override the config seed")
    run_p.add_argument("--out", type=Path, required=True, help="output directory")
    run_p.add_argument("--dump-measures", action="store_true",
                       help="also write each trial's ground-truth measure")
    run_p.add_argument("--trace-dir", type=Path, default=None,
                       help="dump per-iteration solver residual traces here")

    sum_p = sub.add_parser("summarize", help="aggregate a records.csv")
    sum_p.add_argument("records", type=Path)
    sum_p.add_argument("--out", type=Path, default=None,
                       help="summary CSV path (default: stdout)")

    plot_p = sub.add_parser("plot", help="plot mean error vs oversampling ratio")
    plot_p.add_argument("records", type=Path)
    plot_p.add_argument("--out", type=Path, required=True, help="SVG output path")

    args = parser.parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "summarize":
        return _cmd_summarize(args)
    return _cmd_plot(args)


def _cmd_run(args):
    config = bench.read_config(args.config) if args.config else bench.ExperimentConfig()
    if args.seed is not None:
        config.seed = args.seed
    args.out.mkdir(parents=True, exist_ok=True)
    if args.trace_dir is not None:
        args.trace_dir.mkdir(parents=True, exist_ok=True)

    measure_sink = None
    if args.dump_measures:
        mdir = args.out / "measures"
        mdir.mkdir(exist_ok=True)
        measure_sink = lambda trial, mu: save_measure(mu, mdir / f"trial_{trial:04d}.txt")

    records = bench.run_experiment(config, trace_dir=args.trace_dir,
                                   measure_sink=measure_sink)
    bench.write_config(config, args.out / "config.txt")
    bench.write_records(args.out / "records.csv", records)
    bench.write_summary(args.out / "summary.csv", bench.summarize(records))
    aborted = sum(r.aborted for r in records)
    print(f"wrote {args.out / 'records.csv'} ({len(records) - aborted} rows, "
          f"{aborted} aborted)")
    return 0


def _cmd_summarize(args):
    rows = bench.summarize(bench.read_records(args.records))
    if args.out is not None:
        bench.write_summary(args.out, rows)
        print(f"wrote {args.out}")
        return 0
    cols = ["lambda", "K", "method", "n", "aborted",
            "mean_err_max_amp", "median_err_max_amp", "std_err_max_amp"]
    print(",".join(cols))
    for row in rows:
        print(",".join(str(row[c]) for c in cols))
    return 0


def _cmd_plot(args):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = bench.summarize(bench.read_records(args.records))
    series = {}
    for row in rows:
        series.setdefault((row["K"], row["method"]), []).append(
            (row["lambda"], row["mean_err_max_amp"]))

    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    for (K, method) in sorted(series):
        pts = sorted(series[(K, method)])
        style = "--o" if method == "msq" else "-s"
        ax.semilogy([p[0] for p in pts], [p[1] for p in pts], style,
                    label=f"K={K} {method}")
    ax.set_xlabel("oversampling ratio")
    ax.set_ylabel("mean worst-spike amplitude error")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.out, format="svg")
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: ``gensample {inspect,resample,bench,report}``."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import bench
from .data import load_dataset, table_row, write_csv


def _algorithms(text: str) -> tuple:
    algos = tuple(a.strip() for a in text.split(",") if a.strip())
    bad = [a for a in algos if a not in bench.ALGORITHMS]
    if bad or not algos:
        raise argparse.ArgumentTypeError(f"choose from {','.join(bench.ALGORITHMS)}")
    return algos


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, help="master random seed (default 0)")
    p.add_argument("--k", type=int, help="neighbourhood size (default 5)")
    p.add_argument("--beta", type=float, help="GenSample weight/F1 blend (default 0.75)")
    p.add_argument("--explore-prob", type=float, help="chance of a random first parent (default 0.15)")
    p.add_argument("--no-stratify", action="store_true", help="use plain random splits instead of stratified ones")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gensample", description="Genetic minority oversampling toolkit.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("inspect", help="print class statistics of a dataset")
    p.add_argument("manifest", help="dataset manifest (JSON)")

    p = sub.add_parser("resample", help="oversample a whole dataset and write it as CSV")
    p.add_argument("manifest", help="dataset manifest (JSON)")
    p.add_argument("--algo", required=True, choices=[a for a in bench.ALGORITHMS], help="resampling algorithm")
    p.add_argument("--out", required=True, help="output CSV; a GenSample trace goes next to it as .trace.jsonl")
    p.add_argument("--target", choices=["balance"], default="balance",
                   help="SMOTE/ADASYN target; only full balance is supported")
    _common(p)

    p = sub.add_parser("bench", help="run a benchmark experiment from a JSON config")
    p.add_argument("config", help="experiment config (JSON)")
    p.add_argument("--out", default="results", help="output directory (default ./results)")
    p.add_argument("--runs", type=int, help="repetitions per dataset (config default 100)")
    p.add_argument("--algo", type=_algorithms, help="comma-separated subset of none,smote,adasyn,gensample")
    p.add_argument("--jobs", type=int, help="worker processes (default 1)")
    _common(p)

    p = sub.add_parser("report", help="re-emit a CSV report as a text table and optional plot data")
    p.add_argument("report", help="report CSV written by bench")
    p.add_argument("--fig", action="store_true", help="also write F1 plot data")
    p.add_argument("--out", help="plot data path (default: fscore.csv beside the report)")
    return parser


def _overrides(args, cfg: bench.ExperimentConfig) -> bench.ExperimentConfig:
    algos = getattr(args, "algo", None)
    cfg = bench.with_overrides(cfg, seed=args.seed, k=args.k, beta=args.beta, explore_prob=args.explore_prob,
                               runs=getattr(args, "runs", None), algorithms=algos if isinstance(algos, tuple) else None,
                               jobs=getattr(args, "jobs", None))
    if args.no_stratify:
        cfg = replace(cfg, split=replace(cfg.split, stratified=False))
    return cfg


def cmd_inspect(args) -> int:
    manifest, ds = load_dataset(args.manifest)
    row = table_row(manifest.name, ds)
    print(f"{manifest.name}: {row['total']} rows")
    print(f"minority {row['minority']}, majority {row['majority']}, features {row['features']}, "
          f"imbalance {row['imbalance']}")
    return 0


def cmd_resample(args) -> int:
    manifest, ds = load_dataset(args.manifest)
    cfg = _overrides(args, bench.ExperimentConfig(algorithms=(args.algo,)))
    seed = bench.resample_seed(cfg, manifest.name, args.algo, 0)
    out, trace = bench.resample(ds, args.algo, cfg, seed)
    out_path = Path(args.out)
    write_csv(out, out_path)
    n_min, n_maj = out.counts()
    print(f"wrote {out_path}: {len(out)} rows ({len(out) - len(ds)} synthetic), minority {n_min}, majority {n_maj}")
    if trace is not None:
        trace_path = out_path.with_suffix(".trace.jsonl")
        trace.to_jsonl(trace_path)
        print(f"trace {trace_path}: {trace.termination}, validation F1 {trace.initial_f1:.4f} -> {trace.final_f1:.4f}")
    return 0


def cmd_bench(args) -> int:
    cfg = _overrides(args, bench.ExperimentConfig.from_json(args.config))
    report = bench.run_experiment(cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    bench.emit_report(report, out / "report.txt", "table-text")
    bench.emit_report(report, out / "report.csv", "csv")
    bench.emit_fscore_plot_data(report, out / "fscore.csv")
    print(bench.report_text(report), end="")
    if report.failed:
        print("some cells failed; see report.csv", file=sys.stderr)
        return 1
    return 0


def cmd_report(args) -> int:
    report = bench.read_report_csv(args.report)
    print(bench.report_text(report), end="")
    if args.fig:
        path = Path(args.out) if args.out else Path(args.report).with_name("fscore.csv")
        bench.emit_fscore_plot_data(report, path)
        print(f"wrote {path}")
    return 0


COMMANDS = {"inspect": cmd_inspect, "resample": cmd_resample, "bench": cmd_bench, "report": cmd_report}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return COMMANDS[args.command](args)
    except (OSError, ValueError, KeyError) as exc:
        print(f"gensample {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Repeated split / resample / fit / score experiments and their reports."""

from __future__ import annotations

import csv
import io
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .data import Dataset, SplitSpec, derive_seed, load_dataset, make_rng, split
from .metrics import METRICS, MetricSet, evaluate, winning_times
from .resampling import GenSampleParams, adasyn, balance_target, gensample, smote
from .tree import TreeParams, fit, predict, predict_score

log = logging.getLogger(__name__)

ALGORITHMS = ("none", "smote", "adasyn", "gensample")
DISPLAY = {"none": "Decision Tree", "smote": "SMOTE", "adasyn": "ADASYN", "gensample": "GenSample"}


@dataclass(frozen=True)
class ExperimentConfig:
    manifests: tuple = ()
    algorithms: tuple = ALGORITHMS
    runs: int = 100
    seed: int = 0
    split: SplitSpec = SplitSpec()
    k: int = 5
    beta: float = 0.75
    explore_prob: float = 0.15
    adasyn_balance: float = 1.0
    tree: TreeParams = TreeParams()
    jobs: int = 1

    def __post_init__(self):
        object.__setattr__(self, "manifests", tuple(self.manifests))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        if self.runs < 1:
            raise ValueError("runs must be at least 1")
        if not self.algorithms:
            raise ValueError("at least one algorithm is required")
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown:
            raise ValueError(f"unknown algorithm(s) {sorted(unknown)}; choose from {ALGORITHMS}")
        if len(set(self.algorithms)) != len(self.algorithms):
            raise ValueError("duplicate algorithm names")

    def gensample_params(self, seed: int) -> GenSampleParams:
        return GenSampleParams(beta=self.beta, k=self.k, explore_prob=self.explore_prob,
                               tree_params=self.tree, validation_fraction=self.split.validation_fraction,
                               stratified=self.split.stratified, seed=seed)

    @classmethod
    def from_dict(cls, doc: dict, base_dir: Path | None = None) -> "ExperimentConfig":
        doc = dict(doc)
        manifests = []
        for m in doc.pop("datasets", doc.pop("manifests", [])):
            p = Path(m)
            if base_dir is not None and not p.is_absolute():
                p = (base_dir / p).resolve()
            manifests.append(p)
        split_doc = doc.pop("split", {}) or {}
        tree_doc = doc.pop("tree", {}) or {}
        params = doc.pop("params", {}) or {}
        kwargs = {k: doc.pop(k) for k in ("runs", "seed", "k", "beta", "explore_prob", "adasyn_balance", "jobs")
                  if k in doc}
        gs = params.get("gensample", {})
        for key in ("k", "beta", "explore_prob"):
            if key in gs:
                kwargs[key] = gs[key]
        if "balance_level" in params.get("adasyn", {}):
            kwargs["adasyn_balance"] = params["adasyn"]["balance_level"]
        algorithms = tuple(doc.pop("algorithms", ALGORITHMS))
        doc.pop("output_dir", None)
        if doc:
            raise ValueError(f"unknown config field(s): {sorted(doc)}")
        return cls(manifests=manifests, algorithms=algorithms, split=SplitSpec(**split_doc),
                   tree=TreeParams(**tree_doc), **kwargs)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        path = Path(path)
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh), base_dir=path.parent)


def resample(train: Dataset, algorithm: str, cfg: ExperimentConfig, seed: int):
    """Apply one algorithm to a training set; returns (dataset, gensample trace or None)."""
    if algorithm == "none":
        return train, None
    if algorithm == "smote":
        return smote(train, cfg.k, balance_target(train), make_rng(seed)), None
    if algorithm == "adasyn":
        return adasyn(train, cfg.k, cfg.adasyn_balance, make_rng(seed)), None
    if algorithm == "gensample":
        return gensample(train, cfg.gensample_params(seed))
    raise ValueError(f"unknown algorithm {algorithm!r}")


def score(train: Dataset, test: Dataset, tree: TreeParams) -> MetricSet:
    model = fit(train, tree)
    return evaluate(test.labels, predict(model, test.features), predict_score(model, test.features),
                    test.minority_label)


def split_seed(cfg: ExperimentConfig, dataset: str, run: int) -> int:
    return derive_seed(cfg.seed, dataset, "split", run)


def resample_seed(cfg: ExperimentConfig, dataset: str, algorithm: str, run: int) -> int:
    return derive_seed(cfg.seed, dataset, algorithm, run)


@dataclass
class RunResult:
    metrics: MetricSet
    train_counts: tuple = (0, 0)         # (minority, majority) before resampling
    n_synthetic: int = 0
    validation_f1: tuple | None = None   # (initial, final) for gensample
    target: int | None = None            # gensample's synthetic budget
    termination: str | None = None


def run_once(ds: Dataset, name: str, algorithm: str, cfg: ExperimentConfig, run: int) -> RunResult:
    """One replayable (dataset, algorithm, run) cell entry."""
    train, test = split(ds, cfg.split, make_rng(split_seed(cfg, name, run)))
    resampled, trace = resample(train, algorithm, cfg, resample_seed(cfg, name, algorithm, run))
    out = RunResult(score(resampled, test, cfg.tree), train.counts(), n_synthetic=len(resampled) - len(train))
    if trace is not None:
        out.validation_f1 = (trace.initial_f1, trace.final_f1)
        out.target = trace.target_new_samples
        out.termination = trace.termination
    return out


def _run_task(args):
    ds, name, cfg, run = args
    results = {}
    for algo in cfg.algorithms:
        try:
            results[algo] = run_once(ds, name, algo, cfg, run)
        except Exception as exc:  # isolate the failure to this cell
            results[algo] = f"{type(exc).__name__}: {exc}"
    return results


@dataclass
class Cell:
    mean: MetricSet | None = None
    std: MetricSet | None = None
    runs: int = 0
    error: str | None = None
    per_run: list = field(default_factory=list, repr=False)

    @property
    def ok(self) -> bool:
        return self.error is None and self.mean is not None


@dataclass
class ExperimentReport:
    datasets: list
    algorithms: list
    cells: dict            # (dataset, algorithm) -> Cell
    dataset_errors: dict = field(default_factory=dict)

    def cell(self, dataset: str, algorithm: str) -> Cell:
        return self.cells[(dataset, algorithm)]

    @property
    def failed(self) -> bool:
        return bool(self.dataset_errors) or any(not c.ok for c in self.cells.values())

    def complete_datasets(self) -> list:
        return [d for d in self.datasets if all(self.cells[(d, a)].ok for a in self.algorithms)]

    def mean_table(self) -> dict:
        return {d: {a: self.cells[(d, a)].mean for a in self.algorithms} for d in self.complete_datasets()}

    def winning_times(self, decimals: int | None = 2) -> dict:
        table = self.mean_table()
        if not table:
            return {a: {m: 0 for m in METRICS} for a in self.algorithms}
        return winning_times(table, decimals=decimals)


def _aggregate(per_run: list) -> tuple[MetricSet, MetricSet]:
    arr = np.array([[getattr(m, k) for k in METRICS] for m in per_run])
    mean = arr.mean(axis=0)
    std = arr.std(axis=0, ddof=1) if len(arr) > 1 else np.zeros(len(METRICS))
    return MetricSet(*map(float, mean)), MetricSet(*map(float, std))


def run_experiment(cfg: ExperimentConfig, datasets: dict | None = None) -> ExperimentReport:
    """Run every (dataset, algorithm) cell ``cfg.runs`` times and average.

    ``datasets`` optionally supplies already-loaded data as name -> Dataset;
    otherwise each manifest in ``cfg`` is loaded. A dataset that fails to
    load, or a cell whose run raises, is recorded and the rest carry on.
    """
    loaded: dict[str, Dataset] = {}
    errors: dict[str, str] = {}
    names = []
    if datasets is not None:
        loaded.update(datasets)
        names.extend(datasets)
    for path in cfg.manifests:
        try:
            manifest, ds = load_dataset(path)
            name = manifest.name
            loaded[name] = ds
        except Exception as exc:
            name = Path(path).stem
            errors[name] = f"{type(exc).__name__}: {exc}"
            log.error("dataset %s failed to load: %s", name, errors[name])
        if name in names:
            raise ValueError(f"dataset {name!r} listed twice")
        names.append(name)

    tasks = [(loaded[name], name, cfg, r) for name in loaded for r in range(cfg.runs)]
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            outputs = list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * cfg.jobs))))
    else:
        outputs = [_run_task(t) for t in tasks]

    cells = {}
    it = iter(outputs)
    for name in loaded:
        started = time.perf_counter()
        per = [next(it) for _ in range(cfg.runs)]
        for algo in cfg.algorithms:
            results = [p[algo] for p in per]
            bad = next((r for r in results if isinstance(r, str)), None)
            if bad is not None:
                cells[(name, algo)] = Cell(error=bad)
                log.error("cell %s/%s failed: %s", name, algo, bad)
                continue
            mean, std = _aggregate([r.metrics for r in results])
            cells[(name, algo)] = Cell(mean=mean, std=std, runs=len(results), per_run=results)
        log.info("%s: %d runs aggregated in %.2fs", name, cfg.runs, time.perf_counter() - started)
    for name in errors:
        for algo in cfg.algorithms:
            cells[(name, algo)] = Cell(error=errors[name])
    return ExperimentReport(names, list(cfg.algorithms), cells, errors)


CSV_FIELDS = ["dataset", "algorithm", "runs", "status"] + [f"mean_{m}" for m in METRICS] + [f"std_{m}" for m in METRICS]


def report_csv(report: ExperimentReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for d in report.datasets:
        for a in report.algorithms:
            c = report.cells[(d, a)]
            if c.ok:
                vals = [repr(getattr(c.mean, m)) for m in METRICS] + [repr(getattr(c.std, m)) for m in METRICS]
                w.writerow([d, a, c.runs, "ok"] + vals)
            else:
                w.writerow([d, a, 0, f"error: {c.error}"] + [""] * (2 * len(METRICS)))
    return buf.getvalue()


def report_text(report: ExperimentReport) -> str:
    head = f"{'Dataset':<12} {'Algorithm':<14}" + "".join(f"{m:>10}" for m in METRICS)
    rule = "-" * len(head)
    lines = [head, rule]
    for d in report.datasets:
        for i, a in enumerate(report.algorithms):
            c = report.cells[(d, a)]
            label = d if i == 0 else ""
            if c.ok:
                lines.append(f"{label:<12} {DISPLAY[a]:<14}" + "".join(f"{getattr(c.mean, m):>10.2f}" for m in METRICS))
            else:
                lines.append(f"{label:<12} {DISPLAY[a]:<14}  FAILED: {c.error}")
        lines.append(rule)
    wins = report.winning_times()
    for i, a in enumerate(report.algorithms):
        label = "Winning" if i == 0 else ("Times" if i == 1 else "")
        lines.append(f"{label:<12} {DISPLAY[a]:<14}" + "".join(f"{wins[a][m]:>10d}" for m in METRICS))
    lines.append(rule)
    return "\n".join(lines) + "\n"


def emit_report(report: ExperimentReport, path, format: str = "table-text") -> Path:
    """Write the report as a per-dataset text table or as CSV."""
    if not report.algorithms:
        raise ValueError("report has no algorithms")
    if format in ("table-text", "text"):
        content = report_text(report)
    elif format == "csv":
        content = report_csv(report)
    else:
        raise ValueError(f"unknown report format {format!r}")
    path = Path(path)
    path.write_text(content, encoding="utf-8")
    return path


def read_report_csv(path) -> ExperimentReport:
    """Parse a CSV written by :func:`emit_report` back into a report (means and stds only)."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    datasets, algorithms, cells = [], [], {}
    for row in rows:
        d, a = row["dataset"], row["algorithm"]
        if d not in datasets:
            datasets.append(d)
        if a not in algorithms:
            algorithms.append(a)
        if row["status"] == "ok":
            mean = MetricSet.from_values({m: row[f"mean_{m}"] for m in METRICS})
            std = MetricSet.from_values({m: row[f"std_{m}"] for m in METRICS})
            cells[(d, a)] = Cell(mean=mean, std=std, runs=int(row["runs"]))
        else:
            cells[(d, a)] = Cell(error=row["status"].removeprefix("error: "))
    return ExperimentReport(datasets, algorithms, cells)


def emit_fscore_plot_data(report: ExperimentReport, path) -> Path:
    """CSV of (dataset, algorithm, mean F1) for every successful cell."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["dataset", "algorithm", "mean_f1"])
    for d in report.datasets:
        for a in report.algorithms:
            c = report.cells[(d, a)]
            if c.ok:
                w.writerow([d, a, repr(c.mean.f1)])
    path = Path(path)
    path.write_text(buf.getvalue(), encoding="utf-8")
    return path


def with_overrides(cfg: ExperimentConfig, **overrides) -> ExperimentConfig:
    """Copy of ``cfg`` with the non-None overrides applied."""
    return replace(cfg, **{k: v for k, v in overrides.items() if v is not None})

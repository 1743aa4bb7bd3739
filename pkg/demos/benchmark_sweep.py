"""A short version of the full benchmark: every available dataset, 5 runs.

The complete experiment is ``gensample bench configs/full_benchmark.json``; this
script shows the same steps through the library and writes into demo_out/.
"""

# %% Configure
from pathlib import Path

from gensample import bench

root = Path(__file__).resolve().parents[1]
cfg = bench.ExperimentConfig.from_json(root / "configs" / "full_benchmark.json")
cfg = bench.with_overrides(cfg, runs=5)

# %% Run; datasets whose files are absent show up as failed cells
report = bench.run_experiment(cfg)
print(bench.report_text(report))
for name, err in report.dataset_errors.items():
    print(f"skipped {name}: {err}")

# %% Write the table, the CSV and the F1 plot data
out = root / "demo_out"
out.mkdir(exist_ok=True)
bench.emit_report(report, out / "report.txt")
bench.emit_report(report, out / "report.csv", "csv")
bench.emit_fscore_plot_data(report, out / "fscore.csv")

# %% Spread across runs, which the published table leaves out
for name in report.complete_datasets():
    cell = report.cell(name, "gensample")
    print(f"{name:<11} GenSample F1 {cell.mean.f1:.3f} ± {cell.std.f1:.3f}")

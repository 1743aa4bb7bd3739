import json

import numpy as np
import pytest

from conftest import blobs
from gensample import bench
from gensample.data import SplitSpec, make_rng, split
from gensample.metrics import METRICS


@pytest.fixture
def two_sets():
    return {"a": blobs(20, 50, gap=2.0, seed=1), "b": blobs(15, 60, gap=1.5, seed=2)}


def test_config_validation():
    with pytest.raises(ValueError):
        bench.ExperimentConfig(runs=0)
    with pytest.raises(ValueError):
        bench.ExperimentConfig(algorithms=())
    with pytest.raises(ValueError):
        bench.ExperimentConfig(algorithms=("none", "bagging"))


def test_config_from_json(tmp_path, manifests):
    cfg_path = tmp_path / "c.json"
    cfg_path.write_text(json.dumps({"datasets": [str(manifests / "iris.json")], "runs": 3, "seed": 4,
                                    "split": {"stratified": False},
                                    "params": {"gensample": {"beta": 0.6}, "adasyn": {"balance_level": 0.5}}}))
    cfg = bench.ExperimentConfig.from_json(cfg_path)
    assert cfg.runs == 3 and cfg.seed == 4 and cfg.beta == 0.6 and cfg.adasyn_balance == 0.5
    assert not cfg.split.stratified and cfg.algorithms == bench.ALGORITHMS
    cfg_path.write_text(json.dumps({"datasets": [], "colour": "red"}))
    with pytest.raises(ValueError):
        bench.ExperimentConfig.from_json(cfg_path)


def test_iris_report_has_four_full_cells(manifests):
    cfg = bench.ExperimentConfig(manifests=[manifests / "iris.json"], runs=3)
    report = bench.run_experiment(cfg)
    assert report.datasets == ["iris"] and not report.failed
    for algo in bench.ALGORITHMS:
        cell = report.cell("iris", algo)
        assert cell.ok and cell.runs == 3 and len(cell.per_run) == 3


def test_passthrough_equals_direct_evaluation(two_sets):
    cfg = bench.ExperimentConfig(algorithms=("none",), runs=1, seed=5)
    report = bench.run_experiment(cfg, datasets={"a": two_sets["a"]})
    train, test = split(two_sets["a"], SplitSpec(), make_rng(bench.split_seed(cfg, "a", 0)))
    assert report.cell("a", "none").mean == bench.score(train, test, cfg.tree)


def test_means_match_replayed_runs(two_sets):
    cfg = bench.ExperimentConfig(runs=4, seed=2)
    report = bench.run_experiment(cfg, datasets=two_sets)
    for algo in ("smote", "gensample"):
        cell = report.cell("b", algo)
        for r in (0, 2, 3):
            assert bench.run_once(two_sets["b"], "b", algo, cfg, r).metrics == cell.per_run[r].metrics
        replay = [bench.run_once(two_sets["b"], "b", algo, cfg, r).metrics.f1 for r in range(4)]
        assert cell.mean.f1 == np.mean(replay)


def test_runs_share_a_split_across_algorithms(two_sets):
    cfg = bench.ExperimentConfig(seed=1)
    assert bench.split_seed(cfg, "a", 0) != bench.split_seed(cfg, "a", 1)
    assert bench.resample_seed(cfg, "a", "smote", 0) != bench.resample_seed(cfg, "a", "adasyn", 0)


def test_failed_dataset_and_cell_are_isolated(tmp_path, two_sets):
    tiny = blobs(1, 8)   # one minority row: every resampler must fail, passthrough also fails to split
    cfg = bench.ExperimentConfig(manifests=[tmp_path / "missing.json"], runs=2)
    report = bench.run_experiment(cfg, datasets={"a": two_sets["a"], "tiny": tiny})
    assert report.failed
    assert report.cell("a", "gensample").ok
    assert "missing" in report.dataset_errors
    assert not report.cell("missing", "none").ok
    assert not report.cell("tiny", "smote").ok and report.cell("tiny", "smote").error
    assert report.complete_datasets() == ["a"]


def test_report_files_round_trip(tmp_path, two_sets):
    report = bench.run_experiment(bench.ExperimentConfig(runs=2), datasets=two_sets)
    bench.emit_report(report, tmp_path / "r.csv", "csv")
    back = bench.read_report_csv(tmp_path / "r.csv")
    assert back.datasets == report.datasets and back.algorithms == report.algorithms
    for key, cell in report.cells.items():
        assert back.cells[key].mean == cell.mean and back.cells[key].std == cell.std
        assert back.cells[key].runs == cell.runs


def test_text_report_shape(tmp_path, two_sets):
    report = bench.run_experiment(bench.ExperimentConfig(runs=1), datasets=two_sets)
    text = bench.emit_report(report, tmp_path / "r.txt").read_text()
    rows = [l for l in text.splitlines() if l and not l.startswith("-")]
    data_rows = [l for l in rows if l.split()[-1].replace(".", "").isdigit() and "." in l.split()[-1]]
    assert len(data_rows) == 2 * 4
    assert text.count("Winning") == 1
    assert len([l for l in rows if all(tok.isdigit() for tok in l.split()[-6:])]) == 4
    with pytest.raises(ValueError):
        bench.emit_report(report, tmp_path / "r.txt", "html")


def test_emit_report_rejects_empty_algorithm_list(tmp_path):
    empty = bench.ExperimentReport(["a"], [], {})
    with pytest.raises(ValueError):
        bench.emit_report(empty, tmp_path / "x.txt")
    assert not (tmp_path / "x.txt").exists()


def test_plot_data_projection(tmp_path, two_sets):
    report = bench.run_experiment(bench.ExperimentConfig(runs=1), datasets=two_sets)
    lines = bench.emit_fscore_plot_data(report, tmp_path / "f.csv").read_text().splitlines()
    assert lines[0] == "dataset,algorithm,mean_f1" and len(lines) == 1 + 2 * 4
    for line in lines[1:]:
        d, a, v = line.split(",")
        assert float(v) == report.cell(d, a).mean.f1


def test_unwritable_path(tmp_path, two_sets):
    report = bench.run_experiment(bench.ExperimentConfig(runs=1, algorithms=("none",)), datasets=two_sets)
    with pytest.raises(OSError):
        bench.emit_fscore_plot_data(report, tmp_path / "no" / "such" / "dir.csv")


def test_parallel_matches_serial(tmp_path, two_sets):
    serial = bench.run_experiment(bench.ExperimentConfig(runs=3, jobs=1), datasets=two_sets)
    parallel = bench.run_experiment(bench.ExperimentConfig(runs=3, jobs=2), datasets=two_sets)
    assert bench.report_csv(serial) == bench.report_csv(parallel)


def test_std_and_winning_block(two_sets):
    report = bench.run_experiment(bench.ExperimentConfig(runs=3), datasets=two_sets)
    cell = report.cell("a", "none")
    f1 = [r.metrics.f1 for r in cell.per_run]
    assert cell.std.f1 == pytest.approx(np.std(f1, ddof=1))
    wins = report.winning_times()
    assert set(wins) == set(bench.ALGORITHMS) and all(set(w) == set(METRICS) for w in wins.values())

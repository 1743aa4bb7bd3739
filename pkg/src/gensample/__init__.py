"""Genetic minority oversampling with SMOTE/ADASYN baselines and a benchmark harness."""

from .bench import ExperimentConfig, ExperimentReport, emit_fscore_plot_data, emit_report, run_experiment
from .data import Dataset, DatasetManifest, SplitSpec, carve_validation, load_csv, load_dataset, split
from .metrics import METRICS, ConfusionMatrix, MetricSet, evaluate, rank_auc, winning_times
from .neighbors import knn
from .resampling import GenSampleParams, adasyn, gensample, smote
from .tree import TreeModel, TreeParams, fit, predict, predict_score

__all__ = [
    "METRICS", "ConfusionMatrix", "Dataset", "DatasetManifest", "ExperimentConfig", "ExperimentReport",
    "GenSampleParams", "MetricSet", "SplitSpec", "TreeModel", "TreeParams", "adasyn", "carve_validation",
    "emit_fscore_plot_data", "emit_report", "evaluate", "fit", "gensample", "knn", "load_csv", "load_dataset",
    "predict", "predict_score", "rank_auc", "run_experiment", "smote", "split", "winning_times",
]

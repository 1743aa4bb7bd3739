"""Confusion-matrix metrics, rank AUC and winning-times tabulation.

The minority class is the positive class throughout. Any ratio whose
denominator is zero evaluates to 0.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.stats import rankdata

METRICS = ("precision", "recall", "f1", "auc", "accuracy", "gmean")


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class MetricSet:
    precision: float
    recall: float
    f1: float
    auc: float
    accuracy: float
    gmean: float

    def as_dict(self) -> dict:
        return asdict(self)

    def __getitem__(self, name: str) -> float:
        return getattr(self, name)

    @classmethod
    def from_values(cls, values) -> "MetricSet":
        return cls(*(float(values[m]) for m in METRICS))


def _ratio(num, den) -> float:
    return num / den if den else 0.0


def confusion(y_true, y_pred, minority) -> ConfusionMatrix:
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape:
        raise ValueError(f"length mismatch: {y_true.shape} vs {y_pred.shape}")
    if y_true.size == 0:
        raise ValueError("empty input")
    t = y_true == minority
    p = y_pred == minority
    return ConfusionMatrix(
        tp=int(np.count_nonzero(t & p)),
        fp=int(np.count_nonzero(~t & p)),
        tn=int(np.count_nonzero(~t & ~p)),
        fn=int(np.count_nonzero(t & ~p)),
    )


def rank_auc(is_positive, scores) -> float:
    """Mann-Whitney AUC: P(random positive outscores random negative), ties count half.

    Defined as 0.5 when either class is absent.
    """
    is_positive = np.asarray(is_positive, dtype=bool)
    scores = np.asarray(scores, dtype=float)
    n_pos = int(is_positive.sum())
    n_neg = len(is_positive) - n_pos
    if n_pos == 0 or n_neg == 0:
        return 0.5
    ranks = rankdata(scores)  # average ranks resolve ties
    u = ranks[is_positive].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def f1_score(cm: ConfusionMatrix) -> float:
    p = _ratio(cm.tp, cm.tp + cm.fp)
    r = _ratio(cm.tp, cm.tp + cm.fn)
    return _ratio(2 * p * r, p + r)


def metric_set(cm: ConfusionMatrix, y_true=None, scores=None, minority=None) -> MetricSet:
    """All six metrics. ``auc`` needs ``y_true``, ``scores`` and ``minority``; otherwise 0.5."""
    precision = _ratio(cm.tp, cm.tp + cm.fp)
    recall = _ratio(cm.tp, cm.tp + cm.fn)
    f1 = _ratio(2 * precision * recall, precision + recall)
    accuracy = _ratio(cm.tp + cm.tn, cm.total)
    specificity = _ratio(cm.tn, cm.tn + cm.fp)
    gmean = math.sqrt(recall * specificity)
    if y_true is not None and scores is not None:
        y_true = np.asarray(y_true)
        if len(y_true) != cm.total:
            raise ValueError("y_true length does not match the confusion matrix")
        if minority is None:
            raise ValueError("minority label needed to score AUC")
        auc = rank_auc(y_true == minority, scores)
    else:
        auc = 0.5
    return MetricSet(precision, recall, f1, auc, accuracy, gmean)


def evaluate(y_true, y_pred, scores, minority) -> MetricSet:
    return metric_set(confusion(y_true, y_pred, minority), y_true, scores, minority)


def winning_times(table: dict, metrics=METRICS, decimals: int | None = None) -> dict:
    """Count, per algorithm and metric, the datasets where it scores the maximum.

    ``table`` maps dataset -> algorithm -> MetricSet (or a metric->value
    mapping). Every tied algorithm is credited. ``decimals`` rounds values
    before comparing, as a printed table would.
    """
    datasets = list(table)
    if not datasets:
        return {}
    algorithms = list(table[datasets[0]])
    for ds in datasets:
        if set(table[ds]) != set(algorithms):
            raise ValueError(f"dataset {ds!r} has algorithms {sorted(table[ds])}, expected {sorted(algorithms)}")
    wins = {a: {m: 0 for m in metrics} for a in algorithms}
    for ds in datasets:
        for m in metrics:
            vals = {a: float(table[ds][a][m]) for a in algorithms}
            if decimals is not None:
                vals = {a: round(v, decimals) for a, v in vals.items()}
            best = max(vals.values())
            for a, v in vals.items():
                if v == best:
                    wins[a][m] += 1
    return wins

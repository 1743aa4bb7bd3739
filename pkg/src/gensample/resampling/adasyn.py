"""ADASYN: SMOTE with more synthetic rows for minority points among majority neighbours."""

from __future__ import annotations

import numpy as np

from ..data import Dataset
from ..neighbors import knn
from ._common import require_minority
from .smote import smote_samples


def _round_half_up(x):
    return np.floor(np.asarray(x, dtype=float) + 0.5).astype(int)


def difficulty_ratios(ds: Dataset, k: int) -> np.ndarray:
    """Majority share among each minority row's k nearest neighbours, in minority-row order."""
    out = []
    for i in ds.minority_indices:
        res = knn(ds, int(i), k)
        out.append(np.count_nonzero(~ds.is_minority[res.indices]) / len(res))
    return np.array(out, dtype=float)


def allocate(ratios, total: int) -> np.ndarray:
    """Split ``total`` synthetic rows across points in proportion to ``ratios``.

    Each share is rounded half up, then the count is nudged back to exactly
    ``total`` one row at a time, visiting points by decreasing ratio (lower
    index first on ties). All-zero ratios fall back to an even split.
    """
    r = np.asarray(ratios, dtype=float)
    if r.ndim != 1 or len(r) == 0:
        raise ValueError("need at least one ratio")
    if np.any(r < 0):
        raise ValueError("ratios must be non-negative")
    s = r.sum()
    weights = r / s if s > 0 else np.full(len(r), 1.0 / len(r))
    counts = _round_half_up(weights * total)
    order = sorted(range(len(r)), key=lambda i: (-weights[i], i))
    drift = int(total - counts.sum())
    step = 1 if drift > 0 else -1
    pos = 0
    while drift != 0:
        i = order[pos % len(order)]
        pos += 1
        if step < 0 and counts[i] == 0:
            continue
        counts[i] += step
        drift -= step
    return counts


def adasyn_samples(ds: Dataset, k: int, balance_level: float, rng: np.random.Generator):
    """Synthetic rows plus (base, neighbour) provenance as indices into the minority rows."""
    if not 0 < balance_level <= 1:
        raise ValueError("balance_level must lie in (0, 1]")
    require_minority(ds)
    if ds.n_minority >= ds.n_majority:
        raise ValueError("dataset is already balanced")
    total = int(_round_half_up((ds.n_majority - ds.n_minority) * balance_level))
    counts = allocate(difficulty_ratios(ds, k), total)
    bases = np.repeat(np.arange(len(counts)), counts)
    X_min = ds.features[ds.minority_indices]
    return smote_samples(X_min, k, len(bases), rng, bases=bases)


def adasyn(train: Dataset, k: int, balance_level: float, rng: np.random.Generator) -> Dataset:
    """``train`` plus ``round((majority - minority) * balance_level)`` ADASYN rows."""
    samples, *_ = adasyn_samples(train, k, balance_level, rng)
    return train.append(samples)

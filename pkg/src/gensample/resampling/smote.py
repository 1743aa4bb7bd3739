"""SMOTE: interpolate between minority rows and their minority neighbours."""

from __future__ import annotations

import numpy as np

from ..data import Dataset
from ..neighbors import minority_neighbor_table
from ._common import draw_step, interpolate, require_minority


def smote_samples(X_min: np.ndarray, k: int, n_samples: int, rng: np.random.Generator,
                  bases=None):
    """Synthetic rows and their provenance.

    Base rows cycle through ``X_min`` in index order unless ``bases`` lists
    them explicitly. Each base is paired with a uniformly chosen row among
    its ``k`` nearest minority neighbours and a step drawn from (0, 1).

    Returns
    -------
    samples : (n_samples, d) array
    base_idx, neighbor_idx : (n_samples,) int arrays into ``X_min``
    steps : (n_samples,) array
    """
    X_min = np.asarray(X_min, dtype=float)
    m, d = X_min.shape
    if bases is None:
        bases = np.arange(n_samples) % max(m, 1)
    bases = np.asarray(bases, dtype=int)
    samples = np.empty((len(bases), d))
    nbrs = np.empty(len(bases), dtype=int)
    steps = np.empty(len(bases))
    if len(bases) == 0:
        return samples, bases, nbrs, steps
    table = minority_neighbor_table(X_min, k)
    for s, i in enumerate(bases):
        j = table[i, rng.integers(table.shape[1])]
        u = draw_step(rng)
        samples[s] = interpolate(X_min[i], X_min[j], u)
        nbrs[s], steps[s] = j, u
    return samples, bases, nbrs, steps


def smote(train: Dataset, k: int, target_count: int, rng: np.random.Generator) -> Dataset:
    """``train`` plus exactly ``target_count`` synthetic minority rows."""
    if k < 1:
        raise ValueError("k must be positive")
    if target_count < 0:
        raise ValueError("target_count must be non-negative")
    if target_count == 0:
        return train
    require_minority(train)
    X_min = train.features[train.minority_indices]
    samples, *_ = smote_samples(X_min, k, target_count, rng)
    return train.append(samples)

"""Brute-force Euclidean k-nearest-neighbour queries."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset


@dataclass(frozen=True)
class NeighborQueryResult:
    indices: np.ndarray
    distances: np.ndarray

    def __len__(self):
        return len(self.indices)


def pairwise_distances(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    diff = A[:, None, :] - B[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def nearest(points: np.ndarray, query: np.ndarray, k: int, exclude: int | None = None) -> NeighborQueryResult:
    """k rows of ``points`` closest to ``query``; ties go to the lower row index."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    diff = points - query
    dist = np.sqrt(np.einsum("ij,ij->i", diff, diff))
    candidates = np.arange(len(points))
    if exclude is not None:
        keep = candidates != exclude
        candidates, dist = candidates[keep], dist[keep]
    if len(candidates) == 0:
        raise ValueError("no candidate neighbours")
    order = np.lexsort((candidates, dist))[:k]
    return NeighborQueryResult(candidates[order], dist[order])


def knn(ds: Dataset, query_index: int, k: int, class_filter=None) -> NeighborQueryResult:
    """The ``k`` rows nearest to row ``query_index``, the query itself excluded.

    With ``class_filter`` only rows carrying that tag are candidates. Fewer
    than ``k`` candidates yields all of them.
    """
    n = len(ds)
    if not 0 <= query_index < n:
        raise IndexError(f"query index {query_index} out of range for {n} rows")
    pool = np.arange(n)
    if class_filter is not None:
        pool = pool[ds.labels == class_filter]
    pool = pool[pool != query_index]
    if len(pool) == 0:
        raise ValueError(f"no candidate neighbours for row {query_index} (filter={class_filter!r})")
    res = nearest(ds.features[pool], ds.features[query_index], k)
    return NeighborQueryResult(pool[res.indices], res.distances)


def majority_neighbors_ratio(ds: Dataset, query_index: int, k: int) -> float:
    """Share of majority-class rows among the k nearest neighbours (any class)."""
    if not ds.is_minority[query_index]:
        raise ValueError(f"row {query_index} is not a minority row")
    if len(ds) - 1 < k:
        raise ValueError(f"need {k} other rows, dataset has {len(ds) - 1}")
    res = knn(ds, query_index, k)
    return int(np.count_nonzero(~ds.is_minority[res.indices])) / k


def minority_neighbor_table(X_min: np.ndarray, k: int) -> np.ndarray:
    """For each row of ``X_min``, indices of its min(k, m-1) nearest other rows."""
    m = len(X_min)
    if m < 2:
        raise ValueError("need at least two minority rows")
    kk = min(k, m - 1)
    D = pairwise_distances(X_min, X_min)
    idx = np.arange(m)
    table = np.empty((m, kk), dtype=int)
    for i in range(m):
        others = idx[idx != i]
        order = np.lexsort((others, D[i, others]))[:kk]
        table[i] = others[order]
    return table

import math

import numpy as np
import pytest

from gensample.data import Dataset
from gensample.neighbors import knn, majority_neighbors_ratio, minority_neighbor_table, pairwise_distances


def oracle_knn(X, y, q, k, class_filter=None):
    """Full sort of every candidate by (distance, index)."""
    cands = [i for i in range(len(X)) if i != q and (class_filter is None or y[i] == class_filter)]
    ranked = sorted(cands, key=lambda i: (math.dist(X[i], X[q]), i))
    return ranked[:k]


def random_instance(rng, integer=False):
    n = int(rng.integers(2, 101))
    d = int(rng.integers(1, 6))
    X = rng.integers(0, 4, (n, d)).astype(float) if integer else rng.normal(size=(n, d))
    y = rng.integers(0, 2, n)
    return X, y


def test_nearest_by_inspection():
    ds = Dataset([[0, 0], [1, 0], [3, 0]], [1, 0, 0])
    res = knn(ds, 0, 1)
    assert res.indices.tolist() == [1] and res.distances.tolist() == [1.0]


def test_class_filter_skips_closer_rows():
    ds = Dataset([[0, 0], [1, 0], [0.5, 0]], [1, 1, 0], minority_label=1)
    assert knn(ds, 0, 1, class_filter=1).indices.tolist() == [1]


def test_ties_go_to_lower_index():
    ds = Dataset([[0.0], [1.0], [-1.0], [1.0]], [0, 1, 1, 0])
    assert knn(ds, 0, 3).indices.tolist() == [1, 2, 3]


def test_short_pool_returns_everything_and_empty_pool_raises():
    ds = Dataset([[0.0], [1.0], [2.0]], [1, 1, 0], minority_label=1)
    assert len(knn(ds, 0, 5, class_filter=1)) == 1
    with pytest.raises(ValueError):
        knn(Dataset([[0.0], [1.0]], [1, 0], minority_label=1), 0, 1, class_filter=1)


@pytest.mark.parametrize("integer", [False, True])
def test_knn_matches_exhaustive_sort(integer):
    rng = np.random.default_rng(11 + integer)
    for _ in range(100):
        X, y = random_instance(rng, integer)
        if len(set(y.tolist())) < 2:
            y[0] = 1 - y[0]
        ds = Dataset(X, y, minority_label=1)
        q = int(rng.integers(len(X)))
        k = int(rng.integers(1, 8))
        assert knn(ds, q, k).indices.tolist() == oracle_knn(X, y, q, k)
        if (y == 1).sum() > (y[q] == 1):
            assert knn(ds, q, k, class_filter=1).indices.tolist() == oracle_knn(X, y, q, k, 1)


def test_knn_distances_non_decreasing():
    rng = np.random.default_rng(2)
    X = rng.normal(size=(40, 3))
    ds = Dataset(X, [1] * 10 + [0] * 30)
    d = knn(ds, 5, 10).distances
    assert np.all(np.diff(d) >= 0) and np.all(d >= 0)


def test_majority_ratio_examples():
    # query at origin; 4 majority and 1 minority among its 5 nearest
    X = [[0, 0], [1, 0], [0, 1], [-1, 0], [0, -1], [1.1, 1.1], [9, 9]]
    ds = Dataset(X, [1, 0, 0, 0, 0, 1, 1], minority_label=1)
    assert majority_neighbors_ratio(ds, 0, 5) == pytest.approx(0.8)
    safe = Dataset([[i * 0.1, 0] for i in range(6)] + [[10, 0], [11, 0], [12, 0], [13, 0], [14, 0], [15, 0], [16, 0]],
                   [1] * 6 + [0] * 7, minority_label=1)
    assert majority_neighbors_ratio(safe, 0, 5) == 0.0
    lone = Dataset([[0, 0], [5, 5], [6, 5], [5, 6], [6, 6], [7, 7], [8, 8]], [1, 0, 0, 0, 0, 0, 0], minority_label=1)
    assert majority_neighbors_ratio(lone, 0, 5) == 1.0


def test_majority_ratio_values_on_grid():
    rng = np.random.default_rng(4)
    ds = Dataset(rng.normal(size=(50, 2)), rng.integers(0, 2, 50))
    for i in ds.minority_indices:
        r = majority_neighbors_ratio(ds, int(i), 5)
        assert r * 5 == pytest.approx(round(r * 5))


def test_majority_ratio_preconditions():
    ds = Dataset([[0.0], [1.0], [2.0]], [1, 0, 0], minority_label=1)
    with pytest.raises(ValueError):
        majority_neighbors_ratio(ds, 1, 1)
    with pytest.raises(ValueError):
        majority_neighbors_ratio(ds, 0, 5)


def test_distance_symmetry():
    rng = np.random.default_rng(0)
    A = rng.normal(size=(8, 3))
    D = pairwise_distances(A, A)
    np.testing.assert_allclose(D, D.T, rtol=0, atol=0)
    assert np.all(np.diag(D) == 0)


def test_minority_neighbor_table_matches_knn():
    rng = np.random.default_rng(9)
    X = rng.normal(size=(12, 2))
    ds = Dataset(X, np.ones(12, int), minority_label=1)
    table = minority_neighbor_table(X, 5)
    for i in range(12):
        assert table[i].tolist() == knn(ds, i, 5).indices.tolist()
    assert minority_neighbor_table(X[:3], 5).shape == (3, 2)

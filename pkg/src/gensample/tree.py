"""Binary decision tree on numeric features (C4.5-style gain ratio or Gini).

Nodes are stored in flat arrays so prediction over a batch of rows walks all
of them down the tree at once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset

LEAF = -1


@dataclass(frozen=True)
class TreeParams:
    max_depth: int | None = None
    min_samples_leaf: int = 1
    split_criterion: str = "gain_ratio"

    def __post_init__(self):
        if self.min_samples_leaf < 1:
            raise ValueError("min_samples_leaf must be at least 1")
        if self.max_depth is not None and self.max_depth < 0:
            raise ValueError("max_depth must be non-negative or None")
        if self.split_criterion not in ("gain_ratio", "gini"):
            raise ValueError(f"unknown split criterion {self.split_criterion!r}")


@dataclass(frozen=True, eq=False)
class TreeModel:
    feature: np.ndarray      # LEAF for leaves
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    n_minority: np.ndarray   # training rows of each class routed through the node
    n_majority: np.ndarray
    depth: np.ndarray
    minority_label: object
    majority_label: object
    n_features: int

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    @property
    def max_depth(self) -> int:
        return int(self.depth.max())

    def is_leaf(self, node: int) -> bool:
        return self.feature[node] == LEAF

    def same_structure(self, other: "TreeModel") -> bool:
        fields = ("feature", "threshold", "left", "right", "n_minority", "n_majority")
        return all(np.array_equal(getattr(self, f), getattr(other, f), equal_nan=f == "threshold") for f in fields)


def _entropy(pos, total):
    """Binary entropy in bits of ``pos`` positives out of ``total``; 0 where total is 0."""
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(total > 0, pos / np.where(total > 0, total, 1), 0.0)
        q = 1.0 - p
        h = -(np.where(p > 0, p * np.log2(np.where(p > 0, p, 1)), 0.0)
              + np.where(q > 0, q * np.log2(np.where(q > 0, q, 1)), 0.0))
    return h


def _gini(pos, total):
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(total > 0, pos / np.where(total > 0, total, 1), 0.0)
    return 2.0 * p * (1.0 - p)


def split_scores(n_left, pos_left, n, pos, criterion: str):
    """Score of binary splits given left-branch sizes and positive counts.

    Gain ratio is information gain over split information; Gini is the drop
    in weighted impurity. Broadcasts over array arguments.
    """
    n_left = np.asarray(n_left, dtype=float)
    pos_left = np.asarray(pos_left, dtype=float)
    n_right = n - n_left
    pos_right = pos - pos_left
    wl, wr = n_left / n, n_right / n
    if criterion == "gini":
        return _gini(pos, n) - (wl * _gini(pos_left, n_left) + wr * _gini(pos_right, n_right))
    gain = _entropy(pos, n) - (wl * _entropy(pos_left, n_left) + wr * _entropy(pos_right, n_right))
    split_info = _entropy(n_left, n)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(split_info > 0, gain / np.where(split_info > 0, split_info, 1), 0.0)


def best_split(X: np.ndarray, y_min: np.ndarray, params: TreeParams):
    """Best (feature, threshold, score) for one node, or None if nothing can split.

    Candidates are midpoints between adjacent distinct values that leave at
    least ``min_samples_leaf`` rows per side. Ties go to the lower feature
    index, then the lower threshold.
    """
    n, d = X.shape
    leaf = params.min_samples_leaf
    if n < 2 * leaf or d == 0:
        return None
    order = np.argsort(X, axis=0, kind="stable")
    xs = np.take_along_axis(X, order, axis=0)
    pos_left = np.cumsum(y_min[order], axis=0)[:-1]          # (n-1, d)
    n_left = np.arange(1, n)[:, None]
    valid = xs[:-1] < xs[1:]
    if leaf > 1:
        valid &= (n_left >= leaf) & (n - n_left >= leaf)
    if not valid.any():
        return None
    scores = split_scores(n_left, pos_left, n, int(y_min.sum()), params.split_criterion)
    scores = np.where(valid, scores, -np.inf)
    flat = scores.T.ravel()                                  # feature-major
    best = int(np.argmax(flat))
    j, i = divmod(best, n - 1)
    lo, hi = xs[i, j], xs[i + 1, j]
    thr = lo + (hi - lo) / 2.0
    if not lo <= thr < hi:
        thr = lo
    return j, float(thr), float(flat[best])


def fit(ds: Dataset, params: TreeParams = TreeParams()) -> TreeModel:
    """Greedy top-down induction.

    A node becomes a leaf when it is pure, at ``max_depth``, or has no valid
    split. Impure nodes split even when the best score is zero, so any data
    without conflicting duplicate rows is fitted exactly.
    """
    if len(ds) == 0:
        raise ValueError("cannot fit a tree on an empty dataset")
    X = ds.features
    y_min = ds.is_minority.astype(np.int64)

    feature, threshold, left, right, n_min, n_maj, depth = [], [], [], [], [], [], []

    def new_node(rows, level):
        feature.append(LEAF)
        threshold.append(np.nan)
        left.append(LEAF)
        right.append(LEAF)
        pos = int(y_min[rows].sum())
        n_min.append(pos)
        n_maj.append(len(rows) - pos)
        depth.append(level)
        return len(feature) - 1

    stack = [(new_node(np.arange(len(ds)), 0), np.arange(len(ds)))]
    while stack:
        node, rows = stack.pop()
        if n_min[node] == 0 or n_maj[node] == 0:
            continue
        if params.max_depth is not None and depth[node] >= params.max_depth:
            continue
        found = best_split(X[rows], y_min[rows], params)
        if found is None:
            continue
        j, thr, _ = found
        go_left = X[rows, j] <= thr
        feature[node], threshold[node] = j, thr
        lrows, rrows = rows[go_left], rows[~go_left]
        left[node] = new_node(lrows, depth[node] + 1)
        right[node] = new_node(rrows, depth[node] + 1)
        # right pushed first so the left subtree is numbered first
        stack.append((right[node], rrows))
        stack.append((left[node], lrows))

    return TreeModel(
        feature=np.array(feature, dtype=np.int64),
        threshold=np.array(threshold, dtype=float),
        left=np.array(left, dtype=np.int64),
        right=np.array(right, dtype=np.int64),
        n_minority=np.array(n_min, dtype=np.int64),
        n_majority=np.array(n_maj, dtype=np.int64),
        depth=np.array(depth, dtype=np.int64),
        minority_label=ds.minority_label,
        majority_label=ds.majority_label,
        n_features=ds.n_features,
    )


def apply(model: TreeModel, X) -> np.ndarray:
    """Leaf index reached by each row of ``X``; rows equal to a threshold go left."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise ValueError(f"expected rows of {model.n_features} features, got shape {X.shape}")
    node = np.zeros(len(X), dtype=np.int64)
    rows = np.arange(len(X))
    active = model.feature[node] != LEAF
    while active.any():
        idx = rows[active]
        cur = node[idx]
        go_left = X[idx, model.feature[cur]] <= model.threshold[cur]
        node[idx] = np.where(go_left, model.left[cur], model.right[cur])
        active = model.feature[node] != LEAF
    return node


def _as_batch(model, row):
    arr = np.asarray(row, dtype=float)
    single = arr.ndim == 1
    if single:
        if arr.shape[0] != model.n_features:
            raise ValueError(f"expected {model.n_features} features, got {arr.shape[0]}")
        arr = arr[None, :]
    return arr, single


def predict_score(model: TreeModel, row):
    """Minority-class frequency at the reached leaf (scalar for one row, array for a matrix)."""
    X, single = _as_batch(model, row)
    leaf = apply(model, X)
    score = model.n_minority[leaf] / (model.n_minority[leaf] + model.n_majority[leaf])
    return float(score[0]) if single else score


def predict(model: TreeModel, row):
    """Plurality class at the reached leaf; an even leaf predicts the minority class."""
    X, single = _as_batch(model, row)
    leaf = apply(model, X)
    is_min = model.n_minority[leaf] >= model.n_majority[leaf]
    if single:
        return model.minority_label if is_min[0] else model.majority_label
    return np.where(is_min, model.minority_label, model.majority_label)


def predict_minority(model: TreeModel, X) -> np.ndarray:
    """Boolean minority predictions for a matrix of rows."""
    leaf = apply(model, np.asarray(X, dtype=float))
    return model.n_minority[leaf] >= model.n_majority[leaf]


def dump(model: TreeModel, feature_names=None) -> str:
    """Indented plain-text rendering of the tree."""
    lines = []

    def walk(node, indent):
        pad = "  " * indent
        counts = f"[min={model.n_minority[node]} maj={model.n_majority[node]}]"
        if model.feature[node] == LEAF:
            lines.append(f"{pad}leaf {counts}")
            return
        j = model.feature[node]
        name = feature_names[j] if feature_names else f"x{j}"
        lines.append(f"{pad}{name} <= {float(model.threshold[node])!r} {counts}")
        walk(model.left[node], indent + 1)
        lines.append(f"{pad}{name} > {float(model.threshold[node])!r}")
        walk(model.right[node], indent + 1)

    walk(0, 0)
    return "\n".join(lines)

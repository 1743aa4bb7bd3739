"""Datasets, manifest-driven CSV ingestion, splitting and seeded randomness."""

from __future__ import annotations

import csv
import json
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

__all__ = [
    "Dataset",
    "DatasetManifest",
    "SplitSpec",
    "make_rng",
    "derive_seed",
    "load_manifest",
    "load_csv",
    "split",
    "carve_validation",
    "imbalance_ratio",
]


def make_rng(seed: int | np.random.SeedSequence) -> np.random.Generator:
    """PCG64 generator; the same seed replays the same draws on every platform."""
    return np.random.Generator(np.random.PCG64(seed))


def derive_seed(master: int, *keys: int | str) -> int:
    """Child seed for a (master, key...) tuple.

    Strings are hashed with CRC32 so the result does not depend on Python's
    per-process hash salt.
    """
    words = [int(master) & 0xFFFFFFFFFFFFFFFF]
    for key in keys:
        words.append(zlib.crc32(key.encode("utf-8")) if isinstance(key, str) else int(key))
    return int(np.random.SeedSequence(words).generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True, eq=False)
class Dataset:
    """Feature matrix with binary labels and a designated minority class.

    ``minority_label`` defaults to the rarer tag. ``synthetic`` flags rows
    produced by a resampler; it travels with the rows through ``subset`` and
    ``append``.
    """

    features: np.ndarray
    labels: np.ndarray
    minority_label: object = None
    synthetic: np.ndarray | None = None
    classes: tuple = field(default=(), repr=False)

    def __post_init__(self):
        X = np.array(self.features, dtype=float)
        if X.ndim == 1:
            X = X.reshape(-1, 1) if len(X) else X.reshape(0, 0)
        y = np.asarray(self.labels)
        if X.ndim != 2 or X.shape[0] != y.shape[0]:
            raise ValueError(f"{X.shape[0]} feature rows but {y.shape[0]} labels")
        if not np.all(np.isfinite(X)):
            raise ValueError("features must be finite")
        tags, counts = np.unique(y, return_counts=True)
        classes = tuple(self.classes) if self.classes else tuple(tags.tolist())
        if len(set(classes) | set(tags.tolist())) > 2:
            raise ValueError(f"binary labels required, got {sorted(set(classes) | set(tags.tolist()))}")
        minority = self.minority_label
        if minority is None:
            if len(tags) == 0:
                raise ValueError("cannot infer the minority class of an empty dataset")
            # smallest count wins; np.unique order breaks ties
            minority = tags[int(np.argmin(counts))].item()
        classes = tuple(sorted(set(classes) | {minority}, key=lambda t: (t != minority, str(t))))
        syn = np.zeros(len(y), dtype=bool) if self.synthetic is None else np.asarray(self.synthetic, dtype=bool)
        if syn.shape != y.shape:
            raise ValueError("synthetic mask must have one entry per row")
        for arr in (X, y, syn):
            arr.flags.writeable = False
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", y)
        object.__setattr__(self, "minority_label", minority)
        object.__setattr__(self, "synthetic", syn)
        object.__setattr__(self, "classes", classes)

    def __len__(self) -> int:
        return self.labels.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def majority_label(self):
        others = [c for c in self.classes if c != self.minority_label]
        return others[0] if others else None

    @property
    def is_minority(self) -> np.ndarray:
        return self.labels == self.minority_label

    @property
    def minority_indices(self) -> np.ndarray:
        return np.flatnonzero(self.is_minority)

    @property
    def n_minority(self) -> int:
        return int(np.count_nonzero(self.is_minority))

    @property
    def n_majority(self) -> int:
        return len(self) - self.n_minority

    def subset(self, idx) -> "Dataset":
        idx = np.asarray(idx, dtype=int)
        return Dataset(self.features[idx], self.labels[idx], self.minority_label,
                       self.synthetic[idx], self.classes)

    def append(self, rows, label=None, synthetic: bool = True) -> "Dataset":
        """New dataset with ``rows`` added; label defaults to the minority tag."""
        rows = np.atleast_2d(np.asarray(rows, dtype=float))
        if rows.shape[0] == 0:
            return self
        if rows.shape[1] != self.n_features:
            raise ValueError(f"expected {self.n_features} features, got {rows.shape[1]}")
        label = self.minority_label if label is None else label
        labels = np.concatenate([self.labels, np.full(rows.shape[0], label, dtype=self.labels.dtype)])
        return Dataset(np.vstack([self.features, rows]), labels, self.minority_label,
                       np.concatenate([self.synthetic, np.full(rows.shape[0], synthetic)]), self.classes)

    def counts(self) -> tuple[int, int]:
        """(minority, majority) row counts."""
        return self.n_minority, self.n_majority


@dataclass(frozen=True)
class DatasetManifest:
    """How to turn one CSV file into a binary :class:`Dataset`.

    ``label_column`` and ``ignore_columns`` accept 0-based positions (negative
    counts from the end) or header names when ``header`` is set.
    """

    name: str
    path: Path
    label_column: int | str = -1
    positive_values: tuple[str, ...] = ()
    missing_marker: str | None = None
    ignore_columns: tuple[int | str, ...] = ()
    header: bool = False

    def __post_init__(self):
        object.__setattr__(self, "path", Path(self.path))
        object.__setattr__(self, "positive_values", tuple(str(v) for v in self.positive_values))
        object.__setattr__(self, "ignore_columns", tuple(self.ignore_columns))
        if not self.positive_values:
            raise ValueError(f"{self.name}: positive_values must not be empty")


def load_manifest(path) -> DatasetManifest:
    """Read a JSON manifest; a relative ``path`` inside it resolves against the manifest's folder."""
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    missing = {"name", "path", "label_column", "positive_values"} - doc.keys()
    if missing:
        raise ValueError(f"{path}: manifest lacks {sorted(missing)}")
    data_path = Path(doc["path"])
    if not data_path.is_absolute():
        data_path = (path.parent / data_path).resolve()
    return DatasetManifest(
        name=doc["name"],
        path=data_path,
        label_column=doc["label_column"],
        positive_values=tuple(doc["positive_values"]),
        missing_marker=doc.get("missing_marker"),
        ignore_columns=tuple(doc.get("ignore_columns") or ()),
        header=bool(doc.get("header", False)),
    )


def _column_index(spec, header, width, what):
    if isinstance(spec, str):
        if header is None:
            raise ValueError(f"{what} {spec!r} given by name but the file has no header")
        if spec not in header:
            raise ValueError(f"{what} {spec!r} not in header {header}")
        return header.index(spec)
    idx = int(spec)
    if not -width <= idx < width:
        raise ValueError(f"{what} {idx} out of range for {width} columns")
    return idx % width


def read_table(path, header: bool = False) -> tuple[list[str] | None, list[list[str]]]:
    """Raw CSV cells with surrounding whitespace stripped; blank lines skipped."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"data file not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [[cell.strip() for cell in row] for row in csv.reader(fh) if any(c.strip() for c in row)]
    names = None
    if header and rows:
        names, rows = rows[0], rows[1:]
    if rows:
        width = len(names) if names is not None else len(rows[0])
        for lineno, row in enumerate(rows, start=2 if header else 1):
            if len(row) != width:
                raise ValueError(f"{path}: row {lineno} has {len(row)} columns, expected {width}")
    return names, rows


def _encode_column(cells: list[str], marker: str | None, name: str) -> np.ndarray:
    observed = [c for c in cells if c != marker]
    if not observed:
        raise ValueError(f"column {name} has no observed values")
    try:
        values = [float(c) for c in observed]
    except ValueError:
        codes: dict[str, int] = {}
        for c in observed:
            codes.setdefault(c, len(codes))
        values = [float(codes[c]) for c in observed]
    out = np.empty(len(cells))
    missing = np.array([c == marker for c in cells])
    out[~missing] = values
    if missing.any():
        out[missing] = np.median(values)
    return out


def load_csv(path, manifest: DatasetManifest) -> Dataset:
    """Load ``path`` according to ``manifest``.

    Labels in ``manifest.positive_values`` collapse to tag 1, everything else
    to 0. Non-numeric feature columns are integer-coded by order of first
    appearance, and cells equal to the missing marker take the column median
    of the observed values.
    """
    header, rows = read_table(path, manifest.header)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    width = len(rows[0])
    label_idx = _column_index(manifest.label_column, header, width, "label column")
    ignored = {_column_index(c, header, width, "ignored column") for c in manifest.ignore_columns}
    if label_idx in ignored:
        raise ValueError("label column cannot also be ignored")

    raw_labels = [row[label_idx] for row in rows]
    observed = set(raw_labels)
    positives = set(manifest.positive_values)
    unknown = positives - observed
    if unknown:
        raise ValueError(f"positive label(s) {sorted(unknown)} not among observed labels {sorted(observed)}")
    if observed <= positives and len(rows) > 1:
        # a lone row cannot hold two classes; it loads and resamplers reject it later
        raise ValueError("every observed label is positive; need a strict subset")
    labels = np.array([1 if v in positives else 0 for v in raw_labels])

    feature_cols = [j for j in range(width) if j != label_idx and j not in ignored]
    columns = []
    for j in feature_cols:
        name = header[j] if header else str(j)
        columns.append(_encode_column([row[j] for row in rows], manifest.missing_marker, name))
    X = np.column_stack(columns) if columns else np.empty((len(rows), 0))
    n_pos = int(labels.sum())
    minority = 1 if n_pos <= len(labels) - n_pos else 0
    return Dataset(X, labels, minority_label=minority, classes=(0, 1))


def load_dataset(manifest_or_path) -> tuple[DatasetManifest, Dataset]:
    manifest = manifest_or_path
    if not isinstance(manifest, DatasetManifest):
        manifest = load_manifest(manifest_or_path)
    return manifest, load_csv(manifest.path, manifest)


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.5
    validation_fraction: float = 1 / 3
    stratified: bool = True
    seed: int = 0

    def __post_init__(self):
        for name in ("train_fraction", "validation_fraction"):
            value = getattr(self, name)
            if not 0 < value < 1:
                raise ValueError(f"{name} must lie strictly inside (0, 1), got {value}")


def _round_half_up(x: float) -> int:
    return int(np.floor(x + 0.5))


def _partition(ds: Dataset, fraction: float, stratified: bool, rng: np.random.Generator,
               min_per_class: int) -> tuple[np.ndarray, np.ndarray]:
    """Indices (first, second) with ``fraction`` of the rows in ``first``."""
    n = len(ds)
    if n < 2:
        raise ValueError(f"cannot split {n} row(s)")
    if not stratified:
        perm = rng.permutation(n)
        k = _round_half_up(fraction * n)
        if not 0 < k < n:
            raise ValueError(f"cannot split {n} rows with fraction {fraction}")
        return np.sort(perm[:k]), np.sort(perm[k:])

    # Per-class quotas: floor each exact share, then hand the leftover rows
    # to the classes with the largest remainders (minority first on ties).
    target = _round_half_up(fraction * n)
    groups = [np.flatnonzero(ds.labels == c) for c in ds.classes]
    groups = [g for g in groups if len(g)]
    exact = [fraction * len(g) for g in groups]
    quota = [int(np.floor(e)) for e in exact]
    order = sorted(range(len(groups)), key=lambda i: (-(exact[i] - quota[i]), i))
    for i in order[: max(0, target - sum(quota))]:
        quota[i] += 1
    for i, g in enumerate(groups):
        # keep every class on both sides whenever it has the rows for it
        if len(g) >= 2 * min_per_class:
            quota[i] = min(max(quota[i], min_per_class), len(g) - min_per_class)
    first, second = [], []
    for g, q in zip(groups, quota):
        perm = rng.permutation(g)
        first.append(perm[:q])
        second.append(perm[q:])
    return np.sort(np.concatenate(first)), np.sort(np.concatenate(second))


def split(ds: Dataset, spec: SplitSpec, rng: np.random.Generator) -> tuple[Dataset, Dataset]:
    """Random train/test partition (stratified by default)."""
    if spec.stratified and 0 in ds.counts():
        raise ValueError("stratified split needs rows of both classes")
    train_idx, test_idx = _partition(ds, spec.train_fraction, spec.stratified, rng, min_per_class=1)
    return ds.subset(train_idx), ds.subset(test_idx)


def carve_validation(train: Dataset, spec: SplitSpec, rng: np.random.Generator) -> tuple[Dataset, Dataset]:
    """Hold out ``spec.validation_fraction`` of ``train``; returns (fit_set, validation)."""
    if len(train) < 3:
        raise ValueError(f"need at least 3 training rows to carve a validation set, got {len(train)}")
    if spec.stratified and train.n_minority < 2:
        raise ValueError(
            f"{train.n_minority} minority row(s): cannot place one in both the fit and validation sets")
    val_idx, fit_idx = _partition(train, spec.validation_fraction, spec.stratified, rng, min_per_class=1)
    return train.subset(fit_idx), train.subset(val_idx)


def imbalance_ratio(ds: Dataset) -> float:
    """Majority count over minority count."""
    n_min, n_maj = ds.counts()
    if n_min == 0:
        raise ValueError("no minority rows")
    return n_maj / n_min


def table_row(name: str, ds: Dataset) -> dict:
    """One row of dataset summary statistics."""
    return {
        "name": name,
        "total": len(ds),
        "minority": ds.n_minority,
        "majority": ds.n_majority,
        "features": ds.n_features,
        "imbalance": round(imbalance_ratio(ds), 1),
    }


def as_rows(ds: Dataset) -> list[list]:
    return [list(map(float, x)) + [y] for x, y in zip(ds.features, ds.labels.tolist())]


def write_csv(ds: Dataset, path, feature_names: Sequence[str] | None = None, header: bool = True) -> None:
    """Write features, label and a trailing ``synthetic`` flag column."""
    names = list(feature_names) if feature_names else [f"x{j}" for j in range(ds.n_features)]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if header:
            w.writerow(names + ["label", "synthetic"])
        for x, y, s in zip(ds.features, ds.labels.tolist(), ds.synthetic.tolist()):
            w.writerow([repr(float(v)) for v in x] + [y, "true" if s else "false"])

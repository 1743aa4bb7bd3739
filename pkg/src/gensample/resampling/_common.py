from __future__ import annotations

import numpy as np

from ..data import Dataset


def draw_step(rng: np.random.Generator) -> float:
    """Uniform draw from the open interval (0, 1)."""
    u = rng.random()
    while u == 0.0:
        u = rng.random()
    return u


def interpolate(a: np.ndarray, b: np.ndarray, step: float) -> np.ndarray:
    """``a + (b - a) * step``, clipped so rounding never leaves the segment's bounding box."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return np.clip(a + (b - a) * step, np.minimum(a, b), np.maximum(a, b))


def require_minority(ds: Dataset, at_least: int = 2) -> None:
    if ds.n_minority < at_least:
        raise ValueError(f"need at least {at_least} minority rows, got {ds.n_minority}")


def balance_target(ds: Dataset) -> int:
    """Synthetic rows needed for the minority count to reach the majority count."""
    return max(0, ds.n_majority - ds.n_minority)

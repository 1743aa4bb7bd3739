from pathlib import Path

import numpy as np
import pytest

from gensample.data import Dataset

ROOT = Path(__file__).resolve().parents[1]
MANIFESTS = ROOT / "data" / "manifests"


def blobs(n_min=20, n_maj=60, d=2, gap=3.0, seed=0):
    """Two Gaussian clusters; minority labelled 1."""
    rng = np.random.default_rng(seed)
    X = np.vstack([rng.normal(gap, 1.0, (n_min, d)), rng.normal(0.0, 1.0, (n_maj, d))])
    y = np.array([1] * n_min + [0] * n_maj)
    return Dataset(X, y, minority_label=1)


@pytest.fixture
def manifests():
    return MANIFESTS


@pytest.fixture
def toy():
    return blobs()


def pytest_terminal_summary(terminalreporter):
    import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_log.LINES:
            terminalreporter.write_line(line)

"""Walk through one GenSample run on Iris and compare it with the baselines.

Run from the repository root:  python demos/iris_walkthrough.py
"""

# %% Load the data and split it in half
from pathlib import Path

import numpy as np

from gensample import GenSampleParams, SplitSpec, TreeParams, adasyn, gensample, smote, split
from gensample.bench import score
from gensample.data import load_dataset, make_rng, table_row
from gensample.resampling import balance_target

root = Path(__file__).resolve().parents[1]
manifest, iris = load_dataset(root / "data" / "manifests" / "iris.json")
print(table_row(manifest.name, iris))

train, test = split(iris, SplitSpec(), make_rng(3))
print("train", train.counts(), "test", test.counts())

# %% Oversample the training half with GenSample and read the trace
augmented, trace = gensample(train, GenSampleParams(seed=3))
print(f"budget {trace.target_new_samples}, kept {trace.n_synthetic}, stopped by {trace.termination}")
for rec in trace.records[:5]:
    print(f"  iter {rec.iteration}: parents {rec.first_parent}/{rec.second_parent} "
          f"lam={rec.lam:.3f} child{rec.chosen} F1 {rec.f1_before:.3f} -> {rec.f1_after:.3f}"
          f"{' (explore)' if rec.explored else ''}")
print("validation F1 path:", np.round(trace.accepted_f1(), 3))

# %% Same split, four training sets, one tree each
tree = TreeParams()
candidates = {
    "tree only": train,
    "SMOTE": smote(train, 5, balance_target(train), make_rng(4)),
    "ADASYN": adasyn(train, 5, 1.0, make_rng(5)),
    "GenSample": augmented,
}
for name, ds in candidates.items():
    m = score(ds, test, tree)
    print(f"{name:<10} rows {len(ds):>4}  precision {m.precision:.3f}  recall {m.recall:.3f}  F1 {m.f1:.3f}")

from ._common import balance_target, interpolate
from .adasyn import adasyn, adasyn_samples, allocate, difficulty_ratios
from .genetic import (
    DEFAULT_TIERS,
    GenSampleParams,
    Individual,
    IterationRecord,
    Population,
    ResampleTrace,
    crossover,
    crossover_at,
    evaluate_dataset,
    fitness,
    gensample,
    minority_label_weight,
    select_parents,
)
from .smote import smote, smote_samples

__all__ = [
    "DEFAULT_TIERS",
    "GenSampleParams",
    "Individual",
    "IterationRecord",
    "Population",
    "ResampleTrace",
    "adasyn",
    "adasyn_samples",
    "allocate",
    "balance_target",
    "crossover",
    "crossover_at",
    "difficulty_ratios",
    "evaluate_dataset",
    "fitness",
    "gensample",
    "interpolate",
    "minority_label_weight",
    "select_parents",
    "smote",
    "smote_samples",
]

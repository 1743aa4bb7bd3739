"""GenSample: genetic oversampling that stops when validation F1 declines.

Every minority row of the fit set starts as an individual. Each iteration
picks the fittest individual (or, with a small probability, a random one) as
the first parent and one of its nearest minority neighbours as the second,
breeds two children on the segment between them, and keeps whichever child
gives the better validation F1 once added to the fit set. The kept child
replaces the least fit individual in the population; the displaced row stays
in the data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..data import Dataset, SplitSpec, carve_validation, make_rng
from ..metrics import confusion, f1_score
from ..neighbors import knn
from ..tree import TreeParams, fit, predict_minority
from ._common import draw_step, interpolate

# (lower bound on majority-neighbour ratio, weight range), highest tier first
DEFAULT_TIERS = (
    (0.75, (0.8, 1.0)),
    (0.5, (0.6, 0.8)),
    (0.25, (0.4, 0.6)),
    (0.0, (0.2, 0.4)),
)


@dataclass(frozen=True)
class GenSampleParams:
    beta: float = 0.75
    k: int = 5
    explore_prob: float = 0.15
    weight_tiers: tuple = DEFAULT_TIERS
    tree_params: TreeParams = TreeParams()
    validation_fraction: float = 1 / 3
    stratified: bool = True
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.beta < 1:
            raise ValueError(f"beta must lie in (0, 1), got {self.beta}")
        if self.k < 1:
            raise ValueError("k must be positive")
        if not 0 <= self.explore_prob <= 1:
            raise ValueError("explore_prob must lie in [0, 1]")
        if not 0 < self.validation_fraction < 1:
            raise ValueError("validation_fraction must lie in (0, 1)")
        tiers = tuple((float(b), (float(lo), float(hi))) for b, (lo, hi) in self.weight_tiers)
        bounds = [b for b, _ in tiers]
        if not bounds or bounds[-1] != 0.0 or any(a <= b for a, b in zip(bounds, bounds[1:])) or bounds[0] > 1:
            raise ValueError(f"tier bounds must descend strictly within [0, 1] and end at 0: {bounds}")
        for _, (lo, hi) in tiers:
            if not 0 < lo < hi <= 1:
                raise ValueError(f"weight range ({lo}, {hi}) must satisfy 0 < lo < hi <= 1")
        object.__setattr__(self, "weight_tiers", tiers)


def minority_label_weight(ratio: float, tiers=DEFAULT_TIERS, rng: np.random.Generator | None = None) -> float:
    """Random weight from the tier that ``ratio`` falls in, drawn on ``[lo, hi)``."""
    if not 0 <= ratio <= 1:
        raise ValueError(f"ratio must lie in [0, 1], got {ratio}")
    for bound, (lo, hi) in tiers:
        if ratio >= bound:
            break
    w = lo + (hi - lo) * rng.random()
    return w if w < hi else float(np.nextafter(hi, lo))


def fitness(weight: float, delta_f: float, beta: float) -> float:
    return beta * weight + (1 - beta) * delta_f


@dataclass(frozen=True)
class Individual:
    row: int
    weight: float
    delta_f1: float
    fitness: float


class Population:
    """Rows currently allowed to act as first parent."""

    def __init__(self, members):
        self.members = list(members)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def fittest(self) -> Individual:
        return max(self.members, key=lambda ind: (ind.fitness, -ind.row))

    def least_fit_position(self) -> int:
        return min(range(len(self.members)), key=lambda i: (self.members[i].fitness, self.members[i].row))

    def replace_least_fit(self, newcomer: Individual) -> Individual:
        pos = self.least_fit_position()
        out = self.members[pos]
        self.members[pos] = newcomer
        return out

    def rows(self) -> list[int]:
        return [ind.row for ind in self.members]


@dataclass(frozen=True)
class ParentChoice:
    first: Individual
    second: int
    explored: bool


def _neighbor_ratio(ds: Dataset, row: int, k: int) -> float:
    res = knn(ds, row, k)
    return int(np.count_nonzero(~ds.is_minority[res.indices])) / len(res)


def make_individual(ds: Dataset, row: int, delta_f1: float, params: GenSampleParams,
                    rng: np.random.Generator) -> Individual:
    w = minority_label_weight(_neighbor_ratio(ds, row, params.k), params.weight_tiers, rng)
    return Individual(row, w, delta_f1, fitness(w, delta_f1, params.beta))


def select_parents(pop: Population, ds: Dataset, params: GenSampleParams,
                   rng: np.random.Generator) -> ParentChoice:
    """Fittest individual (or a uniform pick with ``explore_prob``) plus a random minority neighbour."""
    if len(pop) == 0:
        raise ValueError("empty population")
    explored = bool(rng.random() < params.explore_prob)
    first = pop.members[int(rng.integers(len(pop)))] if explored else pop.fittest()
    if ds.n_minority < 2:
        raise ValueError("only one minority row available; no second parent exists")
    nbrs = knn(ds, first.row, params.k, class_filter=ds.minority_label).indices
    second = int(nbrs[rng.integers(len(nbrs))])
    return ParentChoice(first, second, explored)


def crossover_at(p1, p2, lam: float) -> tuple[np.ndarray, np.ndarray]:
    """Children at ``lam`` and ``1 - lam`` along the segment from ``p1`` to ``p2``."""
    return interpolate(p1, p2, lam), interpolate(p1, p2, 1.0 - lam)


def crossover(p1, p2, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    return crossover_at(p1, p2, draw_step(rng))


def evaluate_dataset(fit_set: Dataset, validation: Dataset, tree_params: TreeParams = TreeParams()) -> float:
    """Validation F1 (minority positive) of a tree trained on ``fit_set``."""
    if len(fit_set) == 0 or len(validation) == 0:
        raise ValueError("fit and validation sets must be non-empty")
    if validation.n_minority == 0:
        raise ValueError("validation set has no minority rows; F1 is undefined")
    model = fit(fit_set, tree_params)
    pred = predict_minority(model, validation.features)
    truth = validation.is_minority
    return f1_score(confusion(truth, pred, True))


@dataclass
class IterationRecord:
    iteration: int
    first_parent: int
    second_parent: int
    parent1: list
    parent2: list
    lam: float
    child1: list
    child2: list
    chosen: int
    f1_child1: float
    f1_child2: float
    f1_before: float
    f1_after: float
    explored: bool
    accepted: bool

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class ResampleTrace:
    target_new_samples: int
    initial_f1: float
    records: list = field(default_factory=list)
    termination: str = ""
    final_f1: float = float("nan")

    @property
    def n_synthetic(self) -> int:
        return sum(r.accepted for r in self.records)

    def accepted_f1(self) -> list[float]:
        return [self.initial_f1] + [r.f1_after for r in self.records if r.accepted]

    def to_jsonl(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for r in self.records:
                fh.write(json.dumps(r.as_dict()) + "\n")
            fh.write(json.dumps({
                "termination": self.termination,
                "target_new_samples": self.target_new_samples,
                "initial_f1": self.initial_f1,
                "final_f1": self.final_f1,
                "n_synthetic": self.n_synthetic,
            }) + "\n")


def gensample(train: Dataset, params: GenSampleParams = GenSampleParams()) -> tuple[Dataset, ResampleTrace]:
    """Oversample ``train``; returns (train + kept synthetic rows, trace).

    A third of ``train`` (``validation_fraction``) is held out to score each
    candidate child. Generation stops once ``|train| - 2 * |minority|`` rows
    have been added, or when the better child would drop validation F1 below
    the best seen so far; that child is discarded.
    """
    n_min, n_maj = train.counts()
    if n_min < 2 or n_maj < 1:
        raise ValueError(f"need >= 2 minority and >= 1 majority rows, got {n_min} and {n_maj}")
    if n_min >= n_maj:
        raise ValueError("minority must be strictly smaller than majority")
    rng = make_rng(params.seed)
    target = len(train) - 2 * n_min
    fit_set, validation = carve_validation(
        train, SplitSpec(validation_fraction=params.validation_fraction, stratified=params.stratified), rng)
    if validation.n_minority == 0:
        raise ValueError("validation set received no minority rows")
    if fit_set.n_minority < 2:
        raise ValueError("fit set holds fewer than two minority rows; no crossover partner exists")

    pop = Population(make_individual(fit_set, int(i), 0.0, params, rng) for i in fit_set.minority_indices)
    current = evaluate_dataset(fit_set, validation, params.tree_params)
    best = current
    trace = ResampleTrace(target_new_samples=target, initial_f1=current)
    children = []

    while len(children) < target:
        choice = select_parents(pop, fit_set, params, rng)
        p1 = fit_set.features[choice.first.row]
        p2 = fit_set.features[choice.second]
        lam = draw_step(rng)
        c1, c2 = crossover_at(p1, p2, lam)
        f1_c1 = evaluate_dataset(fit_set.append(c1), validation, params.tree_params)
        f1_c2 = evaluate_dataset(fit_set.append(c2), validation, params.tree_params)
        chosen, child, f1_child = (1, c1, f1_c1) if f1_c1 >= f1_c2 else (2, c2, f1_c2)
        accepted = f1_child >= best
        trace.records.append(IterationRecord(
            iteration=len(trace.records), first_parent=choice.first.row, second_parent=choice.second,
            parent1=p1.tolist(), parent2=p2.tolist(), lam=lam, child1=c1.tolist(), child2=c2.tolist(),
            chosen=chosen, f1_child1=f1_c1, f1_child2=f1_c2, f1_before=current, f1_after=f1_child,
            explored=choice.explored, accepted=accepted))
        if not accepted:
            trace.termination = "degradation"
            break
        fit_set = fit_set.append(child)
        children.append(child)
        newcomer = make_individual(fit_set, len(fit_set) - 1, f1_child - current, params, rng)
        pop.replace_least_fit(newcomer)
        current = f1_child
        best = max(best, current)
    else:
        trace.termination = "target_reached"

    trace.final_f1 = current
    augmented = train.append(np.array(children).reshape(len(children), train.n_features))
    return augmented, trace

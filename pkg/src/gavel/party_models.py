"""Classical prediction stack for party affiliation and standing.

Rows are dense feature vectors with optional nulls; training imputes nulls
with train-split medians and, for the linear model, standardizes columns to
train mean 0 / variance 1 (parameters stored for test-time reuse).
Speaker-name removal happens on text before feature extraction so names
cannot leak the label. Every randomized step derives its stream from the
root seed, and all tie-breaks are by class/lexicographic order, so repeat
runs are identical.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence

from .corpus import Roster
from .forest import (
    ForestHyper,
    ForestModel,
    derive_seed,
    forest_accuracy,
    permutation_importance,
    train_forest,
)
from .linear import BinaryLogistic, TrainingMeta, predict_proba, train_binary_logistic

NAME_PLACEHOLDER = "⟨NAME⟩"  # ⟨NAME⟩

_NAME_TOKEN_RE = re.compile(r"[A-Za-z0-9']+")


class Task(str, Enum):
    AFFILIATION = "Affiliation"
    STANDING = "Standing"


TASK_LABEL_ORDER: dict[Task, tuple[str, ...]] = {
    Task.AFFILIATION: ("Democrat", "Republican", "Independent"),
    Task.STANDING: ("Majority", "Minority"),
}


@dataclass(frozen=True)
class GroupKeys:
    session: int
    committee: str
    chamber: str
    hearing_type: str
    government: str  # "Unified" or "Divided"
    presidency: str  # "Democrat" or "Republican"


@dataclass(frozen=True)
class DataRow:
    features: tuple[Optional[float], ...]
    label: str
    groups: GroupKeys
    row_id: str = ""


@dataclass(frozen=True)
class Dataset:
    rows: tuple[DataRow, ...]
    label_task: Task
    schema: tuple[str, ...]

    def __post_init__(self):
        order = TASK_LABEL_ORDER[self.label_task]
        width = len(self.schema)
        for row in self.rows:
            if len(row.features) != width:
                raise ValueError(f"row {row.row_id!r} has {len(row.features)} features, schema has {width}")
            if row.label not in order:
                raise ValueError(f"row {row.row_id!r}: label {row.label!r} outside task {self.label_task.value}")

    @property
    def labels(self) -> list[str]:
        return [r.label for r in self.rows]

    @property
    def label_order(self) -> tuple[str, ...]:
        return TASK_LABEL_ORDER[self.label_task]


@dataclass(frozen=True)
class EvalReport:
    """One split's evaluation: model accuracy against the majority baseline.

    Accuracy and baseline are computed on the same test split; the baseline
    is recomputable from the confusion matrix row sums. Degenerate splits
    (single-class train or test) are reported with the flag set, never
    suppressed.
    """

    split_key: tuple[tuple[str, str], ...]  # ((dimension, value), ...) in canonical order
    task: Task
    accuracy: float
    baseline_accuracy: float
    baseline_class: str
    confusion: tuple[tuple[str, str, int], ...]  # (true, predicted, count)
    n_train: int
    n_test: int
    degenerate: bool = False
    beats_baseline: bool = False
    importances: Optional[tuple[tuple[str, float], ...]] = None
    error: Optional[str] = None

    def __post_init__(self):
        if self.error is None:
            if not (0.0 <= self.accuracy <= 1.0 and 0.0 <= self.baseline_accuracy <= 1.0):
                raise ValueError("accuracy and baseline must lie in [0, 1]")

    @property
    def split_label(self) -> str:
        if not self.split_key:
            return "all"
        return "|".join(f"{dim}={value}" for dim, value in self.split_key)

    def test_class_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for true_label, _, n in self.confusion:
            counts[true_label] = counts.get(true_label, 0) + n
        return counts


def _name_variants(roster: Optional[Roster], member_directory: Iterable[str]) -> list[tuple[str, ...]]:
    variants: set[tuple[str, ...]] = set()

    def add(name: str):
        toks = tuple(t.lower() for t in _NAME_TOKEN_RE.findall(name))
        # single-letter "names" (initials) would shred ordinary text
        if toks and not all(len(t) == 1 for t in toks):
            variants.add(toks)

    if roster is not None:
        for p in roster.people:
            add(p.surname)
            add(p.display_name)
    for name in member_directory:
        add(name)
    # longest first so full names win over bare surnames
    return sorted(variants, key=lambda v: (-len(v), v))


def strip_speaker_names(
    text: str, roster: Optional[Roster] = None, member_directory: Iterable[str] = ()
) -> str:
    """Replace roster/directory names with a neutral placeholder. Idempotent."""
    variants = _name_variants(roster, member_directory)
    if not variants:
        return text
    alternatives = []
    for toks in variants:
        alternatives.append(r"[^A-Za-z0-9']+".join(re.escape(t) for t in toks))
    pattern = re.compile(
        r"(?<![A-Za-z0-9'])(?<!⟨)(?:" + "|".join(alternatives) + r")(?![A-Za-z0-9'])(?!⟩)",
        re.IGNORECASE,
    )
    return pattern.sub(NAME_PLACEHOLDER, text)


def majority_baseline(labels: Sequence[str], order: Optional[Sequence[str]] = None) -> tuple[str, float]:
    """Most frequent label and its share; ties break by `order` position."""
    if not labels:
        raise ValueError("empty label list")
    counts: dict[str, int] = {}
    for lab in labels:
        counts[lab] = counts.get(lab, 0) + 1
    if order is None:
        order = sorted(counts)
    rank = {lab: i for i, lab in enumerate(order)}
    best = min(counts, key=lambda lab: (-counts[lab], rank.get(lab, len(rank))))
    return best, counts[best] / len(labels)


def column_medians(rows: Sequence[Sequence[Optional[float]]], width: int) -> list[float]:
    """Per-column median of the non-null values (0.0 for all-null columns)."""
    medians = []
    for j in range(width):
        vals = sorted(r[j] for r in rows if r[j] is not None)
        if not vals:
            medians.append(0.0)
            continue
        mid = len(vals) // 2
        medians.append(vals[mid] if len(vals) % 2 else (vals[mid - 1] + vals[mid]) / 2.0)
    return medians


def impute(rows: Sequence[Sequence[Optional[float]]], medians: Sequence[float]) -> list[list[float]]:
    return [[medians[j] if v is None else v for j, v in enumerate(row)] for row in rows]


@dataclass(frozen=True)
class Standardizer:
    means: tuple[float, ...]
    scales: tuple[float, ...]

    def apply(self, row: Sequence[float]) -> list[float]:
        return [(v - m) / s for v, m, s in zip(row, self.means, self.scales)]


def fit_standardizer(rows: Sequence[Sequence[float]]) -> Standardizer:
    n = len(rows)
    width = len(rows[0]) if rows else 0
    means = [sum(r[j] for r in rows) / n for j in range(width)]
    scales = []
    for j in range(width):
        var = sum((r[j] - means[j]) ** 2 for r in rows) / n
        scales.append(math.sqrt(var) if var > 0 else 1.0)  # constant columns pass through
    return Standardizer(tuple(means), tuple(scales))


@dataclass(frozen=True)
class LogisticHyper:
    learning_rate: float = 0.5
    epochs: int = 200
    l2: float = 1e-3
    seed: int = 0


@dataclass(frozen=True)
class LinearModel:
    """One-vs-rest logistic over standardized, median-imputed columns."""

    classes: tuple[str, ...]
    per_class: tuple[BinaryLogistic, ...]
    standardizer: Standardizer
    medians: tuple[float, ...]
    hyper: LogisticHyper

    def predict(self, row: Sequence[Optional[float]]) -> tuple[str, dict[str, float]]:
        dense = [m if v is None else v for v, m in zip(row, self.medians)]
        z = self.standardizer.apply(dense)
        sparse = {j: v for j, v in enumerate(z) if v != 0.0}
        scores = [predict_proba(m.weights, m.bias, sparse) for m in self.per_class]
        total = sum(scores)
        probs = [s / total for s in scores] if total > 0 else [1.0 / len(scores)] * len(scores)
        best_i = max(range(len(self.classes)), key=lambda i: (probs[i], -i))
        return self.classes[best_i], dict(zip(self.classes, probs))


def train_logistic(
    x: Sequence[Sequence[Optional[float]]],
    y: Sequence[str],
    classes: Sequence[str],
    hyper: LogisticHyper = LogisticHyper(),
) -> LinearModel:
    if not x:
        raise ValueError("empty training set")
    present = set(y)
    if len(present) < 2:
        raise ValueError("training set contains a single class")
    width = len(x[0])
    medians = column_medians(x, width)
    dense = impute(x, medians)
    std = fit_standardizer(dense)
    z_rows = [std.apply(r) for r in dense]
    sparse_rows = [{j: v for j, v in enumerate(r) if v != 0.0} for r in z_rows]
    models = []
    for c in classes:
        yc = [1 if lab == c else 0 for lab in y]
        if len(set(yc)) < 2:
            # class absent from training data: constant near-zero scorer
            models.append(
                BinaryLogistic(
                    weights=tuple([0.0] * width),
                    bias=-20.0,
                    meta=_zero_meta(hyper, len(x)),
                )
            )
            continue
        core, _ = train_binary_logistic(
            sparse_rows,
            yc,
            n_features=width,
            learning_rate=hyper.learning_rate,
            epochs=hyper.epochs,
            l2=hyper.l2,
            seed=hyper.seed,
        )
        models.append(core)
    return LinearModel(
        classes=tuple(classes),
        per_class=tuple(models),
        standardizer=std,
        medians=tuple(medians),
        hyper=hyper,
    )


def _zero_meta(hyper: LogisticHyper, n: int) -> TrainingMeta:
    return TrainingMeta(seed=hyper.seed, epochs=0, learning_rate=hyper.learning_rate, l2=hyper.l2, n_examples=n)


def stratified_folds(
    labels: Sequence[str], k: int, seed: int
) -> tuple[list[list[int]], list[str]]:
    """Deterministic stratified k-fold assignment; returns (folds, warnings).

    Classes with fewer than k members force a plain unstratified split.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if len(labels) < k:
        raise ValueError(f"need at least {k} rows for {k} folds")
    warnings: list[str] = []
    by_class: dict[str, list[int]] = {}
    for i, lab in enumerate(labels):
        by_class.setdefault(lab, []).append(i)
    small = [lab for lab, idxs in by_class.items() if len(idxs) < k]
    folds: list[list[int]] = [[] for _ in range(k)]
    rng = random.Random(seed)
    if small:
        warnings.append(f"classes with fewer than {k} members ({sorted(small)}); falling back to unstratified folds")
        order = list(range(len(labels)))
        rng.shuffle(order)
        for pos, i in enumerate(order):
            folds[pos % k].append(i)
    else:
        for lab in sorted(by_class):
            idxs = by_class[lab]
            rng.shuffle(idxs)
            for pos, i in enumerate(idxs):
                folds[pos % k].append(i)
    for fold in folds:
        fold.sort()
    return folds, warnings


@dataclass(frozen=True)
class GridCellScore:
    hyper: ForestHyper
    mean_accuracy: float
    fold_accuracies: tuple[float, ...]


def cross_validate_grid(
    x: Sequence[Sequence[float]],
    y: Sequence[str],
    classes: Sequence[str],
    grid: Sequence[ForestHyper],
    k: int = 5,
    seed: int = 0,
) -> tuple[ForestHyper, list[GridCellScore], list[str]]:
    """Grid search by k-fold mean validation accuracy.

    Ties prefer the smaller model: fewer estimators, then shallower trees,
    then grid order.
    """
    if not grid:
        raise ValueError("empty hyperparameter grid")
    folds, warnings = stratified_folds(y, k, seed)
    scores: list[GridCellScore] = []
    for cell_no, hyper in enumerate(grid):
        fold_accs = []
        for held_out in range(k):
            val_idx = folds[held_out]
            train_idx = [i for f in range(k) if f != held_out for i in folds[f]]
            xt = [x[i] for i in train_idx]
            yt = [y[i] for i in train_idx]
            xv = [x[i] for i in val_idx]
            yv = [y[i] for i in val_idx]
            cell_hyper = ForestHyper(
                n_estimators=hyper.n_estimators,
                max_depth=hyper.max_depth,
                min_samples_split=hyper.min_samples_split,
                max_features=hyper.max_features,
                seed=derive_seed(seed, cell_no * k + held_out),
            )
            try:
                model = train_forest(xt, yt, classes, cell_hyper)
                fold_accs.append(forest_accuracy(model, xv, yv))
            except ValueError:
                fold_accs.append(0.0)  # degenerate fold; scored as useless
        scores.append(GridCellScore(hyper, sum(fold_accs) / k, tuple(fold_accs)))

    def depth_rank(h: ForestHyper) -> float:
        return float("inf") if h.max_depth is None else h.max_depth

    best_i = min(
        range(len(scores)),
        key=lambda i: (
            -scores[i].mean_accuracy,
            grid[i].n_estimators,
            depth_rank(grid[i]),
            i,
        ),
    )
    return grid[best_i], scores, warnings


def feature_importance(
    model: ForestModel,
    validation_x: Sequence[Sequence[float]] = (),
    validation_y: Sequence[str] = (),
    mode: str = "Impurity",
    seed: int = 0,
    schema: Optional[Sequence[str]] = None,
) -> dict[str, float]:
    """Feature name -> importance, by impurity decrease or permutation drop."""
    names = list(schema) if schema is not None else [f"f{i}" for i in range(model.n_features)]
    if mode == "Impurity":
        values = model.impurity_importance
        return {names[i]: values[i] for i in range(model.n_features)}
    if mode == "Permutation":
        drops = permutation_importance(model, validation_x, validation_y, seed=seed)
        return {names[i]: drops[i] for i in range(model.n_features)}
    raise ValueError(f"unknown importance mode {mode!r}")

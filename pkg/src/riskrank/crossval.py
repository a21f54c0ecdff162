"""Seeded k-fold partitioning and per-fold accuracy collection.

Fold plans must be reproducible across machines and languages, so the
shuffle uses an explicit 64-bit linear congruential generator (Knuth MMIX
constants: a=6364136223846793005, c=1442695040888963407, modulus 2^64) with
draws taken from the top 31 bits, followed by a Fisher-Yates pass and
round-robin fold assignment. None of the benchmark classifiers has trainable
parameters; the only per-fold fitted state is the Mahalanobis covariance,
which is estimated from the training complement.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .classifier import ClassifierSpec, Prediction, classify_all, _normalized_rows
from .core import Dataset, EmbeddingSet
from .errors import ParamError
from .vecmetrics import MetricSpec, estimate_covariance

_LCG_A = 6364136223846793005
_LCG_C = 1442695040888963407
_LCG_MASK = (1 << 64) - 1


class Lcg64:
    """Minimal MMIX linear congruential generator; draws are the top 31 bits."""

    def __init__(self, seed: int):
        self.state = seed & _LCG_MASK

    def next_u31(self) -> int:
        self.state = (_LCG_A * self.state + _LCG_C) & _LCG_MASK
        return self.state >> 33

    def below(self, n: int) -> int:
        return self.next_u31() % n


@dataclass(frozen=True)
class FoldPlan:
    """Assignment of every item id to a fold index in [0, k)."""

    k: int
    seed: int
    assignments: dict[str, int] = field(repr=False)

    def fold_ids(self, fold: int) -> list[str]:
        return [i for i, f in self.assignments.items() if f == fold]

    def complement_ids(self, fold: int) -> list[str]:
        return [i for i, f in self.assignments.items() if f != fold]

    def sizes(self) -> list[int]:
        out = [0] * self.k
        for f in self.assignments.values():
            out[f] += 1
        return out


def make_folds(item_ids, k: int, seed: int) -> FoldPlan:
    """Deterministic shuffle then round-robin assignment; sizes differ by <= 1."""
    ids = list(item_ids)
    if k < 2:
        raise ParamError(f"k must be >= 2, got {k}")
    if k > len(ids):
        raise ParamError(f"k={k} exceeds item count {len(ids)}")
    if len(set(ids)) != len(ids):
        raise ParamError("item ids must be unique")
    rng = Lcg64(seed)
    shuffled = list(ids)
    for i in range(len(shuffled) - 1, 0, -1):
        j = rng.below(i + 1)
        shuffled[i], shuffled[j] = shuffled[j], shuffled[i]
    return FoldPlan(k, seed, {item: pos % k for pos, item in enumerate(shuffled)})


@dataclass(frozen=True)
class CvResult:
    """Per-fold accuracies plus their mean and n-1 standard deviation."""

    model_name: str
    fold_accuracies: tuple[float, ...]
    mean: float
    std: float
    k: int
    seed: int


def _fold_metric(spec: ClassifierSpec, train_items: EmbeddingSet) -> ClassifierSpec:
    """Fit the per-fold Mahalanobis covariance; other metrics are stateless."""
    m = spec.metric
    if m is None or m.kind != "mahalanobis" or m.covariance is not None:
        return spec
    rows = (
        _normalized_rows(train_items, "item")
        if spec.normalize_inputs
        else train_items.matrix
    )
    model = estimate_covariance(rows, spec.covariance_method, spec.shrinkage_lambda)
    return ClassifierSpec(
        family=spec.family,
        metric=MetricSpec("mahalanobis", covariance=model),
        normalize_inputs=spec.normalize_inputs,
        covariance_method=spec.covariance_method,
        shrinkage_lambda=spec.shrinkage_lambda,
    )


def run_cv(
    dataset: Dataset,
    items: EmbeddingSet | None,
    labels,
    spec: ClassifierSpec,
    plan: FoldPlan,
    model_name: str = "",
) -> CvResult:
    """Evaluate each fold against the rest and collect fold accuracies.

    ``items``/``labels`` are EmbeddingSets for the embedding family; the
    token family reads texts from the dataset and ``labels`` is a LabelSet
    (``items`` is ignored). Fold order in the result is by fold index.
    """
    gold = {it.id: it.gold for it in dataset.items}
    missing = [i for i in plan.assignments if i not in gold]
    if missing:
        raise ParamError(f"fold plan covers unknown items: {missing[:3]}")
    if set(gold) != set(plan.assignments):
        raise ParamError("fold plan does not cover the dataset exactly")

    accuracies = []
    for fold in range(plan.k):
        test_ids = plan.fold_ids(fold)
        if spec.family == "token_jaccard":
            by_id = {it.id: it for it in dataset.items}
            preds = classify_all([by_id[i] for i in test_ids], labels, spec)
        else:
            train = items.subset(plan.complement_ids(fold))
            fitted = _fold_metric(spec, train)
            preds = classify_all(items.subset(test_ids), labels, fitted)
        hits = sum(1 for p in preds if p.predicted == gold[p.item_id])
        accuracies.append(hits / len(test_ids))

    acc = np.asarray(accuracies, dtype=np.float64)
    std = float(acc.std(ddof=1)) if acc.size > 1 else 0.0
    return CvResult(
        model_name=model_name,
        fold_accuracies=tuple(float(a) for a in acc),
        mean=float(acc.mean()),
        std=std,
        k=plan.k,
        seed=plan.seed,
    )


def per_item_flags(
    dataset: Dataset,
    items: EmbeddingSet | None,
    labels,
    spec: ClassifierSpec,
    plan: FoldPlan | None = None,
) -> dict[str, bool]:
    """Correctness flag per item, either full-set or under a fold plan.

    For stateless metrics the two agree item by item; the Mahalanobis
    covariance makes them differ, which is the point of fitting per fold.
    """
    gold = {it.id: it.gold for it in dataset.items}
    flags: dict[str, bool] = {}
    if plan is None:
        if spec.family == "token_jaccard":
            preds = classify_all(dataset.items, labels, spec)
        else:
            preds = classify_all(items, labels, spec)
        for p in preds:
            flags[p.item_id] = p.predicted == gold[p.item_id]
        return flags
    for fold in range(plan.k):
        test_ids = plan.fold_ids(fold)
        if spec.family == "token_jaccard":
            by_id = {it.id: it for it in dataset.items}
            preds = classify_all([by_id[i] for i in test_ids], labels, spec)
        else:
            fitted = _fold_metric(spec, items.subset(plan.complement_ids(fold)))
            preds = classify_all(items.subset(test_ids), labels, fitted)
        for p in preds:
            flags[p.item_id] = p.predicted == gold[p.item_id]
    return flags

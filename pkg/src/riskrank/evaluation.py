"""Confusion matrices, per-class precision/recall/F1, and macro averages.

Undefined ratios (0/0) are reported as 0 throughout, matching the zero
entries in the benchmark tables. Display rounding to two decimals happens
only at the formatting edge; computations keep full precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import CATEGORIES
from .errors import ParamError


@dataclass(frozen=True)
class ConfusionMatrix:
    """k x k counts; rows are gold classes, columns predicted classes."""

    labels: tuple[str, ...]
    counts: np.ndarray

    def __post_init__(self) -> None:
        counts = np.array(self.counts, dtype=np.int64)
        if counts.ndim != 2 or counts.shape != (len(self.labels), len(self.labels)):
            raise ParamError("counts must be k x k with k = number of labels")
        if np.any(counts < 0):
            raise ParamError("counts must be non-negative")
        counts.setflags(write=False)
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def supports(self) -> np.ndarray:
        return self.counts.sum(axis=1)


@dataclass(frozen=True)
class ClassificationReport:
    per_class: dict[str, dict[str, float]]
    accuracy: float
    macro_precision: float
    macro_recall: float
    macro_f1: float


def confusion(gold, predicted, labels=CATEGORIES) -> ConfusionMatrix:
    """Count (gold, predicted) pairs into a matrix over ``labels``."""
    gold = list(gold)
    predicted = list(predicted)
    if len(gold) != len(predicted):
        raise ParamError(f"length mismatch: {len(gold)} gold vs {len(predicted)} predicted")
    if not gold:
        raise ParamError("need at least one prediction")
    index = {lab: i for i, lab in enumerate(labels)}
    counts = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for g, p in zip(gold, predicted):
        if g not in index:
            raise ParamError(f"gold label {g!r} not in label list")
        if p not in index:
            raise ParamError(f"predicted label {p!r} not in label list")
        counts[index[g], index[p]] += 1
    return ConfusionMatrix(tuple(labels), counts)


def _safe_div(num: float, den: float) -> float:
    return num / den if den else 0.0


def report(cm: ConfusionMatrix) -> ClassificationReport:
    """Per-class precision/recall/F1/support, accuracy and macro averages."""
    if cm.total < 1:
        raise ParamError("cannot report on an empty confusion matrix")
    counts = cm.counts
    per_class: dict[str, dict[str, float]] = {}
    precisions, recalls, f1s = [], [], []
    for i, lab in enumerate(cm.labels):
        tp = float(counts[i, i])
        p = _safe_div(tp, float(counts[:, i].sum()))
        r = _safe_div(tp, float(counts[i, :].sum()))
        f1 = _safe_div(2 * p * r, p + r)
        per_class[lab] = {
            "precision": p,
            "recall": r,
            "f1": f1,
            "support": int(counts[i, :].sum()),
        }
        precisions.append(p)
        recalls.append(r)
        f1s.append(f1)
    return ClassificationReport(
        per_class=per_class,
        accuracy=float(np.trace(counts)) / cm.total,
        macro_precision=float(np.mean(precisions)),
        macro_recall=float(np.mean(recalls)),
        macro_f1=float(np.mean(f1s)),
    )


def macro_table(reports: dict[str, ClassificationReport]) -> list[dict]:
    """Rows of (model, macro P/R/F1) with 2-decimal percent display fields.

    Unrounded values are kept under ``*_raw``; display strings round half
    away from zero to 2 decimals as percentages.
    """
    if not reports:
        raise ParamError("macro_table needs at least one report")
    rows = []
    for model, rep in reports.items():
        rows.append(
            {
                "model": model,
                "macro_precision": _pct(rep.macro_precision),
                "macro_recall": _pct(rep.macro_recall),
                "macro_f1": _pct(rep.macro_f1),
                "macro_precision_raw": rep.macro_precision,
                "macro_recall_raw": rep.macro_recall,
                "macro_f1_raw": rep.macro_f1,
            }
        )
    return rows


def _pct(x: float) -> str:
    # benchmark-table convention: round the fraction to 2 decimals first,
    # so 0.7333 prints as 73.00%, not 73.33%
    return f"{round(x, 2) * 100:.2f}%"

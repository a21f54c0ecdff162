"""Nearest-label zero-shot classification.

Similarity metrics take the argmax over labels, distances the argmin. Ties
go to the first label in canonical category order and are flagged on the
prediction so evaluation can report tie incidence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import CATEGORIES, EmbeddingSet, LabelSet
from .errors import ParamError, ZeroNormError
from .textsim import jaccard, tokenize
from .vecmetrics import MetricSpec, estimate_covariance, metric_value


@dataclass(frozen=True)
class ClassifierSpec:
    """Configuration of one classifier variant.

    ``embedding_metric`` needs a ``metric``; ``token_jaccard`` works on raw
    texts and ignores it. ``normalize_inputs`` L2-normalizes items and labels
    before any metric is evaluated (the benchmark default for embeddings).
    For Mahalanobis with no pre-fitted covariance, the model is estimated
    from the item embeddings under evaluation using ``covariance_method``.
    """

    family: str
    metric: MetricSpec | None = None
    normalize_inputs: bool = True
    covariance_method: str = "pseudo_inverse"
    shrinkage_lambda: float = 0.1

    def __post_init__(self) -> None:
        if self.family not in ("embedding_metric", "token_jaccard"):
            raise ParamError(f"unknown classifier family {self.family!r}")
        if self.family == "embedding_metric" and self.metric is None:
            raise ParamError("embedding_metric requires a metric spec")

    @property
    def direction(self) -> str:
        """'argmax' for similarities (cosine, jaccard), 'argmin' for distances."""
        if self.family == "token_jaccard" or self.metric.is_similarity:
            return "argmax"
        return "argmin"


@dataclass(frozen=True)
class Prediction:
    item_id: str
    predicted: str
    scores: dict[str, float] = field(repr=False)
    tie: bool = False


def _pick(scores: np.ndarray, direction: str) -> tuple[int, bool]:
    """Index of the extremum; ties resolve to the lowest index and are flagged."""
    if direction == "argmax":
        best = float(np.max(scores))
    else:
        best = float(np.min(scores))
    hits = np.flatnonzero(scores == best)
    return int(hits[0]), len(hits) > 1


def _normalized_rows(emb: EmbeddingSet, what: str) -> np.ndarray:
    norms = np.linalg.norm(emb.matrix, axis=1)
    zero = np.flatnonzero(norms == 0.0)
    if zero.size:
        raise ZeroNormError(f"{what} {emb.ids[int(zero[0])]!r} has zero norm")
    return emb.matrix / norms[:, None]


def _ordered_label_rows(labels: EmbeddingSet) -> list[int]:
    """Row index per canonical category; label ids must be the category names."""
    index = {lid.strip().lower(): r for r, lid in enumerate(labels.ids)}
    missing = [c for c in CATEGORIES if c not in index]
    if missing:
        raise ParamError(f"label embedding set is missing categories: {missing}")
    return [index[c] for c in CATEGORIES]


def classify_all(items, labels, spec: ClassifierSpec) -> list[Prediction]:
    """Predict one label per item; output order follows input order.

    For ``embedding_metric``, ``items`` and ``labels`` are EmbeddingSets
    (label ids are the category names). For ``token_jaccard``, ``items`` is
    an iterable of objects with ``id`` and ``text`` (or (id, text) pairs) and
    ``labels`` is a LabelSet.
    """
    if spec.family == "token_jaccard":
        return _classify_tokens(items, labels)
    return _classify_embeddings(items, labels, spec)


def _classify_tokens(items, labels: LabelSet) -> list[Prediction]:
    label_tokens = [tokenize(labels.texts[c]) for c in CATEGORIES]
    out = []
    for item in items:
        item_id, text = (item.id, item.text) if hasattr(item, "id") else item
        toks = tokenize(text)
        scores = np.array([jaccard(toks, lt) for lt in label_tokens])
        k, tie = _pick(scores, "argmax")
        out.append(
            Prediction(item_id, CATEGORIES[k], dict(zip(CATEGORIES, scores.tolist())), tie)
        )
    return out


def _classify_embeddings(
    items: EmbeddingSet, labels: EmbeddingSet, spec: ClassifierSpec
) -> list[Prediction]:
    if items.dim != labels.dim:
        raise ParamError(
            f"item dim {items.dim} does not match label dim {labels.dim}"
        )
    if spec.normalize_inputs:
        item_rows = _normalized_rows(items, "item")
        label_rows = _normalized_rows(labels, "label")
    else:
        item_rows = items.matrix
        label_rows = labels.matrix
    label_rows = label_rows[_ordered_label_rows(labels)]

    metric = spec.metric
    if metric.kind == "mahalanobis" and metric.covariance is None:
        model = estimate_covariance(
            item_rows, spec.covariance_method, spec.shrinkage_lambda
        )
        metric = MetricSpec("mahalanobis", covariance=model)

    direction = spec.direction
    out = []
    for r, item_id in enumerate(items.ids):
        try:
            scores = np.array(
                [metric_value(item_rows[r], lrow, metric) for lrow in label_rows]
            )
        except ZeroNormError as e:
            raise ZeroNormError(f"item {item_id!r}: {e}") from e
        k, tie = _pick(scores, direction)
        out.append(
            Prediction(item_id, CATEGORIES[k], dict(zip(CATEGORIES, scores.tolist())), tie)
        )
    return out

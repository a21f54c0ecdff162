"""Shared domain types: categories, labeled items, embedding sets, datasets.

Everything here is immutable after construction and safe to share across
threads. Validation that is cheap happens in constructors; whole-dataset
consistency checks live in :func:`validate_dataset`, which reports violations
as data instead of raising.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimError, ParamError

# Canonical category order. First-in-order wins ties in the classifier, so
# this ordering is part of the observable contract, not a cosmetic choice.
CATEGORIES: tuple[str, ...] = (
    "personal",
    "workplace",
    "psychosocial",
    "organizational",
    "biomechanical",
)


def normalize_category(name: str) -> str:
    """Lower-case and validate a category name against the fixed five."""
    key = name.strip().lower()
    if key not in CATEGORIES:
        raise ParamError(f"unknown category {name!r}; expected one of {CATEGORIES}")
    return key


def is_category(name: str) -> bool:
    return name.strip().lower() in CATEGORIES


@dataclass(frozen=True)
class LabeledItem:
    """A risk-factor phrase with its gold category."""

    id: str
    text: str
    gold: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "gold", self.gold.strip().lower())


@dataclass(frozen=True)
class LabelSet:
    """The five categories plus the text embedded for each category.

    By default each category is represented by its bare category word; longer
    descriptions may be configured, which changes what gets embedded but not
    the category identities.
    """

    texts: dict[str, str] = field(
        default_factory=lambda: {c: c for c in CATEGORIES}
    )

    def __post_init__(self) -> None:
        normalized = {}
        for name, text in self.texts.items():
            normalized[normalize_category(name)] = text
        missing = [c for c in CATEGORIES if c not in normalized]
        if missing:
            raise ParamError(f"label set is missing categories: {missing}")
        extra = [c for c in normalized if c not in CATEGORIES]
        if extra:
            raise ParamError(f"label set has unknown categories: {extra}")
        object.__setattr__(self, "texts", normalized)

    def ordered_names(self) -> tuple[str, ...]:
        return CATEGORIES

    def ordered_texts(self) -> list[str]:
        return [self.texts[c] for c in CATEGORIES]


def as_vector(components, *, name: str = "vector") -> np.ndarray:
    """Coerce to a finite float64 1-D array; reject empty or non-finite input."""
    v = np.asarray(components, dtype=np.float64)
    if v.ndim != 1 or v.size < 1:
        raise DimError(f"{name} must be 1-D with at least one component")
    if not np.all(np.isfinite(v)):
        raise ParamError(f"{name} has non-finite components")
    return v


class EmbeddingSet:
    """Row-aligned matrix of item vectors with ids, texts and model metadata.

    Rows of ``matrix`` follow ``ids``/``texts`` order. ``normalized`` asserts
    that every row has unit L2 norm within 1e-6; the constructor checks it.
    """

    __slots__ = ("ids", "texts", "matrix", "model_id", "normalized")

    def __init__(self, ids, texts, matrix, model_id: str, normalized: bool = False):
        ids = tuple(ids)
        texts = tuple(texts)
        matrix = np.array(matrix, dtype=np.float64)
        if matrix.ndim != 2:
            raise DimError("embedding matrix must be 2-D (items x dim)")
        if matrix.shape[1] < 1:
            raise DimError("embedding dim must be >= 1")
        if len(ids) != matrix.shape[0] or len(texts) != matrix.shape[0]:
            raise DimError("ids, texts and matrix rows must align")
        if len(set(ids)) != len(ids):
            raise ParamError("embedding set has duplicate ids")
        if not np.all(np.isfinite(matrix)):
            raise ParamError("embedding matrix has non-finite components")
        if normalized and matrix.shape[0] > 0:
            norms = np.linalg.norm(matrix, axis=1)
            off = np.abs(norms - 1.0)
            if np.any(off > 1e-6):
                bad = ids[int(np.argmax(off))]
                raise ParamError(
                    f"normalized=True but vector {bad!r} has norm off by {off.max():.3g}"
                )
        matrix.setflags(write=False)
        self.ids = ids
        self.texts = texts
        self.matrix = matrix
        self.model_id = model_id
        self.normalized = normalized

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    def vector(self, item_id: str) -> np.ndarray:
        return self.matrix[self.ids.index(item_id)]

    def subset(self, keep_ids) -> "EmbeddingSet":
        keep = list(keep_ids)
        index = {i: k for k, i in enumerate(self.ids)}
        rows = [index[i] for i in keep]
        return EmbeddingSet(
            keep,
            [self.texts[r] for r in rows],
            self.matrix[rows],
            self.model_id,
            self.normalized,
        )


@dataclass(frozen=True)
class Dataset:
    """Labeled items plus the label set they are classified against."""

    items: tuple[LabeledItem, ...]
    labels: LabelSet = field(default_factory=LabelSet)

    def __post_init__(self) -> None:
        object.__setattr__(self, "items", tuple(self.items))

    def ids(self) -> list[str]:
        return [it.id for it in self.items]

    def golds(self) -> list[str]:
        return [it.gold for it in self.items]


@dataclass(frozen=True)
class Violation:
    """One invariant violation found in a dataset; ``item_id`` may be empty."""

    code: str
    item_id: str
    message: str


def validate_dataset(dataset: Dataset) -> list[Violation]:
    """Check every dataset invariant; return all violations (empty = valid).

    Violations are data, not errors: this never raises and never mutates.
    """
    out: list[Violation] = []
    seen: set[str] = set()
    for it in dataset.items:
        if it.id in seen:
            out.append(Violation("duplicate-id", it.id, f"id {it.id!r} appears more than once"))
        seen.add(it.id)
        if not it.text.strip():
            out.append(Violation("empty-text", it.id, f"item {it.id!r} has empty text"))
        if it.gold not in CATEGORIES:
            out.append(
                Violation("unknown-label", it.id, f"item {it.id!r} has unknown label {it.gold!r}")
            )
        elif it.gold not in dataset.labels.texts:
            out.append(
                Violation("label-missing", it.id, f"gold {it.gold!r} missing from label set")
            )
    return out

"""The canonical 25-factor corpus: five risk factors per category.

Ids are stable kebab-case slugs; texts are the survey spellings. This module
is the single source of truth used to build the dataset manifest, the
committed embedding fixtures, and the canonical survey column names.
"""

from __future__ import annotations

from .core import Dataset, LabeledItem, LabelSet

# (id, text, gold category)
FACTORS: tuple[tuple[str, str, str], ...] = (
    ("age", "Age", "personal"),
    ("gender", "Gender", "personal"),
    ("anthropometry", "Anthropometry", "personal"),
    ("lifestyle", "Lifestyle", "personal"),
    ("work-experience", "Work experience", "personal"),
    ("layout", "Layout", "workplace"),
    ("pace-of-work", "Pace of work", "workplace"),
    ("noise", "Noise", "workplace"),
    ("inappropriate-lighting", "Inappropriate lighting", "workplace"),
    ("environmental-condition", "Environmental condition", "workplace"),
    ("job-dissatisfaction", "Job dissatisfaction", "psychosocial"),
    ("social-support", "Social support", "psychosocial"),
    ("mental-and-occupational-stress", "Mental and occupational stress", "psychosocial"),
    ("job-insecurity", "Job insecurity", "psychosocial"),
    ("effort-reward-imbalance", "Effort reward imbalance", "psychosocial"),
    ("insufficient-break", "Insufficient break", "organizational"),
    ("poor-job-design", "Poor job design", "organizational"),
    ("high-job-demand", "High job demand", "organizational"),
    ("management-style", "Management style", "organizational"),
    ("poor-employee-facility", "Poor employee facility", "organizational"),
    ("working-posture", "Working posture", "biomechanical"),
    ("vibration", "Vibration", "biomechanical"),
    ("repetitive-motion", "Repetitive motion", "biomechanical"),
    ("force", "Force", "biomechanical"),
    ("deviation-from-neutral-body-alignment", "Deviation from neutral body alignment", "biomechanical"),
)

# Survey columns are the factor texts, addressed alphabetically.
SURVEY_FACTOR_NAMES: tuple[str, ...] = tuple(sorted(t for _, t, _ in FACTORS))


def canonical_dataset(label_texts: dict[str, str] | None = None) -> Dataset:
    """Build the 25-item dataset; optionally override the label phrases."""
    labels = LabelSet(label_texts) if label_texts else LabelSet()
    return Dataset(
        items=tuple(LabeledItem(i, t, g) for i, t, g in FACTORS),
        labels=labels,
    )

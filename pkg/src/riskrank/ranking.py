"""Mode-based severity ranking of survey matrices.

Each survey column holds the severity ranks (1 = most severe) that the
participants assigned to one risk factor. The factor's score is the mode of
its column; factors are ordered by ascending mode, with ties broken by
ascending column mean and then by factor name, and every tie-break is
recorded so divergence from a published ranking stays diagnosable.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import ParamError
from .stats import descriptive

RANK_MIN = 1
RANK_MAX = 25


@dataclass(frozen=True)
class SurveyMatrix:
    """participants x factors integer ranks, each in [1, 25].

    Rows are not required to be permutations; participants may repeat values.
    ``permutation_violations`` reports the rows that are not permutations of
    1..25 as a data-quality signal without rejecting them.
    """

    factors: tuple[str, ...]
    responses: np.ndarray

    def __post_init__(self) -> None:
        factors = tuple(self.factors)
        if len(set(factors)) != len(factors):
            raise ParamError("factor names must be unique")
        if not factors:
            raise ParamError("survey needs at least one factor")
        resp = np.array(self.responses, dtype=np.int64)
        if resp.ndim != 2 or resp.shape[1] != len(factors):
            raise ParamError("responses must be P x len(factors)")
        if resp.shape[0] < 1:
            raise ParamError("survey needs at least one participant")
        if np.any(resp < RANK_MIN) or np.any(resp > RANK_MAX):
            raise ParamError(f"rank values must be in [{RANK_MIN}, {RANK_MAX}]")
        resp.setflags(write=False)
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "responses", resp)

    @property
    def participants(self) -> int:
        return self.responses.shape[0]

    def column(self, factor: str) -> np.ndarray:
        return self.responses[:, self.factors.index(factor)]

    def permutation_violations(self) -> list[int]:
        """Row indices whose values are not a permutation of 1..n_factors."""
        n = len(self.factors)
        expected = set(range(1, n + 1))
        return [
            r
            for r in range(self.participants)
            if set(self.responses[r].tolist()) != expected
        ]


def mode_of(column) -> tuple[int, int, bool]:
    """(mode value, its count, multimodal flag) for one response column.

    When several values share the top count the smallest wins (severity 1 is
    the most severe, so ambiguity resolves toward severity) and the
    multimodal flag is set.
    """
    values = list(column)
    if not values:
        raise ParamError("mode of an empty column is undefined")
    counts = Counter(int(v) for v in values)
    top = max(counts.values())
    modal = sorted(v for v, c in counts.items() if c == top)
    return modal[0], top, len(modal) > 1


@dataclass(frozen=True)
class RankingResult:
    per_factor: dict[str, dict] = field(repr=False)
    tie_breaks_applied: tuple[str, ...] = ()

    def final_ranks(self) -> dict[str, int]:
        return {f: info["final_rank"] for f, info in self.per_factor.items()}


def rank_factors(survey: SurveyMatrix) -> RankingResult:
    """Assign final ranks 1..n by ascending (mode, column mean, name)."""
    rows = []
    for f in survey.factors:
        col = survey.column(f)
        mode_value, mode_count, multimodal = mode_of(col)
        rows.append((mode_value, float(col.mean()), f, mode_count, multimodal))
    rows.sort(key=lambda r: (r[0], r[1], r[2]))

    tie_notes = []
    by_mode: dict[int, list[str]] = {}
    for mode_value, _, name, _, _ in rows:
        by_mode.setdefault(mode_value, []).append(name)
    for mode_value, names in sorted(by_mode.items()):
        if len(names) > 1:
            tie_notes.append(
                f"mode {mode_value} shared by {', '.join(names)}; "
                "ordered by ascending mean then name"
            )

    per_factor = {}
    for rank, (mode_value, mean, name, mode_count, multimodal) in enumerate(rows, start=1):
        per_factor[name] = {
            "mode_value": mode_value,
            "mode_count": mode_count,
            "multimodal": multimodal,
            "mean": mean,
            "final_rank": rank,
        }
    ordered = {f: per_factor[f] for f in survey.factors}
    return RankingResult(ordered, tuple(tie_notes))


def describe_factors(survey: SurveyMatrix) -> list[dict]:
    """Descriptive statistics per factor, ordered by factor name."""
    out = []
    for f in sorted(survey.factors):
        stats = descriptive(survey.column(f))
        out.append({"factor": f, **stats})
    return out

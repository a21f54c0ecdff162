"""Generate the committed synthetic survey reconstruction.

The original 1050-participant survey is distributed through a data
repository this build environment cannot reach, so the repository ships a
synthetic reconstruction that matches the published summary structure of
the real data:

- each factor column's mode equals the factor's published rank (uniquely,
  with a count margin, so the mode-based ranking reproduces the published
  ranking with no tie-breaking);
- min 1 and max 25 in every column, with the published integer quartiles
  exact under type-7 interpolation;
- column means and standard deviations within +/-0.005 of the published
  values.

Columns are built as per-value count histograms: quartile blocks get fixed
totals placing the interpolation positions inside the quartile value runs,
then a two-phase integer hill-climb matches the first and second moments
(single-unit moves within a block adjust the sum; cross-block paired moves
adjust the sum of squares at fixed sum). Cells are shuffled per column with
a seeded generator, so rows are independent draws, not permutations.

Everything is asserted before writing; the script fails loudly otherwise.
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from riskrank.io import load_survey, write_survey
from riskrank.ranking import SurveyMatrix, mode_of, rank_factors
from riskrank.stats import descriptive

SEED = 424_242
P = 1050
OUT = Path(__file__).resolve().parents[1] / "data" / "survey_synthetic.csv"

# factor text -> (rank/mode, mean, std, q25, q50, q75); min 1 / max 25 everywhere
TARGETS: dict[str, tuple[int, float, float, int, int, int]] = {
    "Age": (6, 13.35, 6.81, 6, 15, 19),
    "Anthropometry": (4, 10.26, 7.51, 4, 7, 16),
    "Deviation from neutral body alignment": (9, 11.96, 6.91, 7, 10, 18),
    "Effort reward imbalance": (24, 13.74, 7.64, 7, 14, 21),
    "Environmental condition": (17, 13.96, 6.64, 8, 17, 19),
    "Force": (8, 12.12, 7.32, 7, 10, 19),
    "Gender": (16, 13.81, 6.52, 9, 14, 19),
    "High job demand": (10, 12.62, 6.93, 6, 12, 18),
    "Inappropriate lighting": (18, 14.27, 6.71, 10, 15, 19),
    "Insufficient break": (14, 13.57, 6.79, 8, 14, 19),
    "Job dissatisfaction": (11, 11.00, 6.72, 4, 11, 16),
    "Job insecurity": (25, 14.66, 8.03, 8, 15, 23),
    "Layout": (3, 12.14, 7.19, 6, 11, 18),
    "Lifestyle": (21, 14.18, 6.79, 9, 14, 21),
    "Management style": (22, 14.09, 7.08, 8, 15, 22),
    "Mental and occupational stress": (13, 12.69, 7.33, 6, 13, 19),
    "Noise": (19, 12.85, 6.88, 7, 13, 19),
    "Pace of work": (7, 13.22, 6.61, 7, 13, 18),
    "Poor employee facility": (23, 13.79, 7.76, 6, 13, 22),
    "Poor job design": (12, 14.36, 6.78, 9, 14, 19),
    "Repetitive motion": (2, 11.46, 7.75, 4, 9, 19),
    "Social support": (15, 12.62, 7.00, 6, 14, 17),
    "Vibration": (5, 11.76, 6.84, 5, 10, 17),
    "Work experience": (20, 14.12, 7.00, 8, 15, 20),
    "Working posture": (1, 12.41, 8.22, 4, 13, 20),
}

# Quartile interpolation positions (n-1)*q for n=1050 are 262.25, 524.5 and
# 786.75, so the cumulative count through q25/q50/q75 must reach 264/526/788
# and the count strictly below each quartile value must stay at or under
# 262/524/786. Within those constraints the block totals follow each
# column's own normal shape, otherwise skewed columns (mode far from the
# mean) have no feasible second moment.
CUM_MIN = (264, 526, 788)
CUM_BELOW_MAX = (262, 524, 786)
MODE_MARGIN = 5
SPIKE_HEADROOM = 45  # spike exceeds the runner-up by margin + headroom at init
RUN_FLOOR = 8
END_FLOOR = 2


def _phi(z: float) -> float:
    import math

    return 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))


class Column:
    def __init__(self, mode: int, q25: int, q50: int, q75: int, mean: float, std: float):
        self.counts = np.zeros(26, dtype=np.int64)  # index 1..25
        self.mode = mode
        self.quarts = (q25, q50, q75)
        self.blocks = [
            list(range(1, q25 + 1)),
            list(range(q25 + 1, q50 + 1)),
            list(range(q50 + 1, q75 + 1)),
            list(range(q75 + 1, 26)),
        ]
        # Cumulative totals through each quartile follow the normal shape,
        # clipped to the ranges that keep the interpolation positions inside
        # each quartile value's run.
        cums = []
        hi = [CUM_BELOW_MAX[1], CUM_BELOW_MAX[2], P - END_FLOOR]
        prev = 0
        for i, q in enumerate((q25, q50, q75)):
            want = round(P * _phi((q + 0.5 - mean) / std))
            cum = min(max(want, CUM_MIN[i], prev + RUN_FLOOR), hi[i])
            cums.append(cum)
            prev = cum
        self.run_floor = {
            q25: max(RUN_FLOOR, cums[0] - CUM_BELOW_MAX[0]),
            q50: max(RUN_FLOOR, cums[1] - CUM_BELOW_MAX[1]),
            q75: max(RUN_FLOOR, cums[2] - CUM_BELOW_MAX[2]),
        }
        # Smooth initial shape: a discretized normal at the target moments,
        # renormalized within each quartile block to the block's exact total,
        # so the later moment corrections stay small and local.
        sizes = (cums[0], cums[1] - cums[0], cums[2] - cums[1], P - cums[2])
        values = np.arange(1, 26, dtype=np.float64)
        weights = np.exp(-0.5 * ((values - mean) / std) ** 2)
        for block, total in zip(self.blocks, sizes):
            w = weights[np.array(block) - 1]
            w = w / w.sum() * total
            alloc = np.floor(w).astype(np.int64)
            for i in np.argsort(w - np.floor(w))[::-1][: total - int(alloc.sum())]:
                alloc[i] += 1
            floors = np.array([self._floor(v) for v in block])
            while np.any(alloc < floors):
                short = int(np.argmax(floors - alloc))
                rich = int(np.argmax(alloc - floors))
                alloc[short] += 1
                alloc[rich] -= 1
            self.counts[np.array(block)] = alloc
        # mode spike: dominate every other value with margin, stolen in-block
        block = next(b for b in self.blocks if mode in b)
        ceiling = int(max(np.delete(self.counts[1:26], mode - 1)))
        need = ceiling + MODE_MARGIN + SPIKE_HEADROOM - self.counts[mode]
        siblings = [v for v in block if v != mode]
        while need > 0 and siblings:
            for v in sorted(siblings, key=lambda v: -self.counts[v]):
                if need <= 0:
                    break
                if self.counts[v] > self._floor(v):
                    self.counts[v] -= 1
                    self.counts[mode] += 1
                    need -= 1
            else:
                if all(self.counts[v] <= self._floor(v) for v in siblings):
                    break

    def _floor(self, v: int) -> int:
        floor = 0
        if v in (1, 25):
            floor = END_FLOOR
        if v in self.quarts:
            floor = max(floor, self.run_floor[v])
        return floor

    def _block_of(self, v: int):
        return next(b for b in self.blocks if v in b)

    def _movable(self, src: int, dst: int) -> bool:
        if not 1 <= dst <= 25 or dst == src or src == self.mode:
            return False
        if self._block_of(src) is not self._block_of(dst):
            return False
        if self.counts[src] - 1 < self._floor(src):
            return False
        if dst != self.mode and self.counts[dst] + 1 > self.counts[self.mode] - MODE_MARGIN:
            return False
        return True

    def move(self, src: int, dst: int) -> None:
        self.counts[src] -= 1
        self.counts[dst] += 1

    def s(self) -> int:
        return int(np.dot(self.counts[1:26], np.arange(1, 26)))

    def ss(self) -> int:
        return int(np.dot(self.counts[1:26], np.arange(1, 26) ** 2))

    def _in_block_moves(self) -> list[tuple[int, int]]:
        out = []
        for block in self.blocks:
            for src in block:
                for dst in block:
                    if src != dst and self._movable(src, dst):
                        out.append((src, dst))
        return out

    def fit_moments(self, s_target: int, ss_target: int) -> None:
        # stage 1: land the sum exactly; a move src->dst shifts S by dst-src
        for _ in range(5_000):
            gap = s_target - self.s()
            if gap == 0:
                break
            steps = [
                (src, dst)
                for src, dst in self._in_block_moves()
                if np.sign(dst - src) == np.sign(gap) and abs(dst - src) <= abs(gap)
            ]
            if not steps:
                raise AssertionError(f"cannot adjust sum (gap {gap})")
            src, dst = max(steps, key=lambda m: abs(m[1] - m[0]))
            self.move(src, dst)
        else:
            raise AssertionError("sum adjustment did not converge")

        # stage 2: sum-preserving move pairs for the sum of squares
        for _ in range(20_000):
            gap = ss_target - self.ss()
            if abs(gap) <= 2:
                return
            moves = self._in_block_moves()
            ups = {}
            for src, dst in moves:
                ups.setdefault(dst - src, []).append((src, dst))
            best = None  # (pair, delta) with delta = SS change
            for (a, a2) in moves:
                shift = a2 - a
                for (b, b2) in ups.get(-shift, ()):
                    if (b, b2) == (a, a2) or b in (a, a2) or b2 in (a, a2):
                        continue
                    delta = (a2 * a2 - a * a) + (b2 * b2 - b * b)
                    if delta == 0 or np.sign(delta) != np.sign(gap):
                        continue
                    better_fit = abs(gap - delta) < abs(gap)
                    if better_fit and (best is None or abs(gap - delta) < abs(gap - best[1])):
                        best = (((a, a2), (b, b2)), delta)
            if best is None:
                raise AssertionError(f"cannot adjust sum of squares (gap {gap})")
            (a, a2), (b, b2) = best[0]
            self.move(a, a2)
            self.move(b, b2)
        raise AssertionError("sum-of-squares adjustment did not converge")

    def expand(self, rng: np.random.Generator) -> np.ndarray:
        values = np.repeat(np.arange(1, 26), self.counts[1:26])
        assert values.shape[0] == P
        rng.shuffle(values)
        return values


def build_column(name: str, rng: np.random.Generator) -> np.ndarray:
    mode, mean, std, q25, q50, q75 = TARGETS[name]
    col = Column(mode, q25, q50, q75, mean, std)
    s_target = round(P * mean)
    ss_target = round((P - 1) * std**2 + s_target**2 / P)
    col.fit_moments(s_target, ss_target)

    counts = col.counts
    assert counts[1:26].sum() == P and counts[1] >= 1 and counts[25] >= 1
    mv, _, multi = mode_of(np.repeat(np.arange(1, 26), counts[1:26]))
    assert mv == mode and not multi, f"{name}: mode {mv} (multi={multi}), want {mode}"
    second = int(max(np.delete(counts[1:26], mode - 1)))
    assert counts[mode] >= second + MODE_MARGIN
    return col.expand(rng)


def main() -> None:
    rng = np.random.default_rng(SEED)
    factors = tuple(sorted(TARGETS))
    matrix = np.column_stack([build_column(f, rng) for f in factors])
    survey = SurveyMatrix(factors, matrix)

    ranking = rank_factors(survey)
    for factor, (rank, *_rest) in TARGETS.items():
        got = ranking.per_factor[factor]["final_rank"]
        assert got == rank, f"{factor}: rank {got}, want {rank}"
    assert not ranking.tie_breaks_applied

    for factor, (_, mean, std, q25, q50, q75) in TARGETS.items():
        st = descriptive(survey.column(factor))
        assert abs(st["mean"] - mean) < 0.005, (factor, st["mean"], mean)
        assert abs(st["std"] - std) < 0.005, (factor, st["std"], std)
        assert (st["min"], st["max"]) == (1.0, 25.0)
        assert (st["q25"], st["q50"], st["q75"]) == (q25, q50, q75), (factor, st)

    OUT.parent.mkdir(exist_ok=True)
    write_survey(OUT, survey)
    reloaded = load_survey(OUT)
    assert np.array_equal(reloaded.responses, survey.responses)
    print(f"wrote {OUT} ({P} rows x {len(factors)} factors)")
    print(f"non-permutation rows: {len(survey.permutation_violations())} of {P}")


if __name__ == "__main__":
    main()

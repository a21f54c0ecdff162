"""Mode-based severity ranking of the survey matrix plus per-factor
descriptive statistics.

Run: python demos/demo_ranking.py
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from riskrank import describe_factors, rank_factors
from riskrank.io import load_survey

repo = Path(__file__).resolve().parents[1]
survey = load_survey(repo / "data/survey_synthetic.csv")
print(f"{survey.participants} participants x {len(survey.factors)} factors")
print(f"rows that are full permutations: "
      f"{survey.participants - len(survey.permutation_violations())}")

result = rank_factors(survey)
print("\nseverity ranking (1 = most severe), by rank:")
by_rank = sorted(result.per_factor.items(), key=lambda kv: kv[1]["final_rank"])
for factor, info in by_rank[:5]:
    print(f"  {info['final_rank']:>2}  {factor:<40} mode={info['mode_value']}"
          f" (x{info['mode_count']})")
print("  ...")
for factor, info in by_rank[-3:]:
    print(f"  {info['final_rank']:>2}  {factor:<40} mode={info['mode_value']}"
          f" (x{info['mode_count']})")

if result.tie_breaks_applied:
    print("\ntie-breaks applied:")
    for note in result.tie_breaks_applied:
        print("  -", note)
else:
    print("\nno tie-breaking was needed (all modes distinct)")

print("\ndescriptive statistics (first rows, factors alphabetical):")
print(f"{'factor':<40} {'mean':>6} {'std':>6} {'q25':>4} {'q50':>4} {'q75':>4}")
for row in describe_factors(survey)[:6]:
    print(f"{row['factor']:<40} {row['mean']:>6.2f} {row['std']:>6.2f}"
          f" {row['q25']:>4.0f} {row['q50']:>4.0f} {row['q75']:>4.0f}")

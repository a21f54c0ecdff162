"""Run the complete benchmark from the committed config and show the bundle.

Run: python demos/demo_full_experiment.py
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from riskrank.pipeline import load_config, run_experiment

repo = Path(__file__).resolve().parents[1]
config = load_config(repo / "configs/experiment.toml")

import os

os.chdir(repo)  # config paths are repo-relative
bundle = run_experiment(config)

print("config hash:", bundle.config_hash[:16], "...")
print("\nmodel accuracies:")
for slug, run in bundle.models.items():
    print(f"  {run.name:<48} {run.report.accuracy:.2f}")

print(f"\npairwise comparisons: {len(bundle.pairwise)}")
significant = [row for row in bundle.pairwise if row["decision"] != "no_difference"]
print(f"with a significant or practical difference: {len(significant)}")
for row in significant[:5]:
    print(f"  {row['model_1']} vs {row['model_2']}: "
          f"t={row['t_stat']:.2f} p={row['p_value']:.2g} -> {row['decision']}")

print(f"\ntop-ranked survey factors:")
ranks = bundle.ranking.final_ranks()
for factor in sorted(ranks, key=ranks.get)[:3]:
    print(f"  {ranks[factor]}. {factor}")

out = Path(config.output_dir)
print(f"\nbundle written to {out}/ ({len(list(out.iterdir()))} files)")

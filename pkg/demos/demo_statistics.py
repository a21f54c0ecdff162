"""Cross-validate two classifier variants and compare them with the paired
t-test and both Cohen's d effect sizes.

Run: python demos/demo_statistics.py
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from riskrank import (
    ClassifierSpec,
    MetricSpec,
    TestConfig,
    make_folds,
    paired_t_test,
    run_cv,
    t_cdf,
)
from riskrank.corpus import canonical_dataset
from riskrank.io import load_fixture

repo = Path(__file__).resolve().parents[1]
dataset = canonical_dataset()
st_items = load_fixture(repo / "fixtures/st_items.jsonl")
st_labels = load_fixture(repo / "fixtures/st_labels.jsonl")
st_labels_cos = load_fixture(repo / "fixtures/st_labels_cosine.jsonl")

# the t CDF itself: a few recognizable quantiles
print("t_cdf(0, df=9)      =", t_cdf(0.0, 9))
print("t_cdf(2.262, df=9)  =", round(t_cdf(2.262, 9), 4), "(~97.5th percentile)")
print("t_cdf(1, df=1)      =", round(t_cdf(1.0, 1), 4), "(Cauchy: 0.75)")

# ten-fold CV for two variants on the same fold plan
plan = make_folds(dataset.ids(), k=10, seed=20240501)
euclid = run_cv(
    dataset, st_items, st_labels,
    ClassifierSpec("embedding_metric", MetricSpec("euclidean")),
    plan, model_name="st+euclidean",
)
cosine = run_cv(
    dataset, st_items, st_labels_cos,
    ClassifierSpec("embedding_metric", MetricSpec("cosine")),
    plan, model_name="st+cosine",
)
print("\nfold accuracies")
print("  euclidean:", [round(a, 2) for a in euclid.fold_accuracies])
print("  cosine:   ", [round(a, 2) for a in cosine.fold_accuracies])

result = paired_t_test(
    euclid.fold_accuracies, cosine.fold_accuracies,
    TestConfig(alpha=0.05, d_threshold=0.5, d_variant="pooled"),
)
print("\npaired comparison euclidean vs cosine")
print(f"  t = {result.t_stat:.4f}  (df = {result.df})")
print(f"  p = {result.p_value:.3g}")
print(f"  cohen's d (paired) = {result.cohens_d_paired:.3f}")
print(f"  cohen's d (pooled) = {result.cohens_d_pooled:.3f}")
print(f"  decision: {result.decision}")

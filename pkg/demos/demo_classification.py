"""Classify the 25-factor corpus with every benchmark variant and print the
per-model accuracy table from the committed reference fixtures.

Run: python demos/demo_classification.py
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from riskrank import ClassifierSpec, MetricSpec, classify_all, confusion, report
from riskrank.corpus import canonical_dataset
from riskrank.io import load_fixture

repo = Path(__file__).resolve().parents[1]
dataset = canonical_dataset()
gold = {it.id: it.gold for it in dataset.items}

st_items = load_fixture(repo / "fixtures/st_items.jsonl")
st_labels = load_fixture(repo / "fixtures/st_labels.jsonl")
st_labels_cos = load_fixture(repo / "fixtures/st_labels_cosine.jsonl")
bert_items = load_fixture(repo / "fixtures/bert_items.jsonl")
bert_labels = load_fixture(repo / "fixtures/bert_labels.jsonl")

variants = [
    ("bert + cosine", bert_items, bert_labels, MetricSpec("cosine")),
    ("token jaccard", None, None, None),
    ("st + cosine", st_items, st_labels_cos, MetricSpec("cosine")),
    ("st + euclidean", st_items, st_labels, MetricSpec("euclidean")),
    ("st + manhattan", st_items, st_labels, MetricSpec("manhattan")),
    ("st + mahalanobis", st_items, st_labels, MetricSpec("mahalanobis")),
    ("st + minkowski(3)", st_items, st_labels, MetricSpec("minkowski", p=3.0)),
    ("st + bray-curtis", st_items, st_labels, MetricSpec("bray_curtis")),
]

print(f"{'model':<20} {'accuracy':>8}  {'macro-P':>8} {'macro-R':>8} {'macro-F1':>8}")
for name, items, labels, metric in variants:
    if metric is None:
        spec = ClassifierSpec("token_jaccard")
        preds = classify_all(dataset.items, dataset.labels, spec)
    else:
        spec = ClassifierSpec("embedding_metric", metric)
        preds = classify_all(items, labels, spec)
    rep = report(confusion([gold[p.item_id] for p in preds], [p.predicted for p in preds]))
    print(
        f"{name:<20} {rep.accuracy:>8.2f}  {rep.macro_precision:>8.2f} "
        f"{rep.macro_recall:>8.2f} {rep.macro_f1:>8.2f}"
    )

# where do the errors go? inspect one imperfect variant's predictions
print("\nst + cosine misclassifications:")
spec = ClassifierSpec("embedding_metric", MetricSpec("cosine"))
for p in classify_all(st_items, st_labels_cos, spec):
    if p.predicted != gold[p.item_id]:
        print(f"  {p.item_id:<28} gold={gold[p.item_id]:<12} predicted={p.predicted}")

"""Command-line surface: one subcommand per pipeline stage.

Exit codes: 0 success, 1 data error (module exceptions, verbatim on stderr),
2 usage error (argparse). Every subcommand takes ``--format {table,json,csv}``;
table and csv are derived from the same payload as the JSON output, so JSON
re-parses to exactly the table content.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import io as rio
from .classifier import ClassifierSpec, classify_all
from .core import CATEGORIES, validate_dataset
from .crossval import make_folds, run_cv
from .errors import RiskrankError
from .evaluation import confusion, report
from .pipeline import load_config, run_experiment
from .ranking import describe_factors, rank_factors
from .stats import TestConfig, paired_t_test
from .vecmetrics import MetricSpec

_METRICS = ("cosine", "euclidean", "manhattan", "minkowski", "bray_curtis", "mahalanobis", "jaccard")


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def _pct(x: float) -> str:
    return f"{round(x, 2) * 100:.2f}%"


def emit(payload, rows_fn, fmt: str, out=None) -> None:
    """Print a payload as json, or as rows derived from it (csv/table)."""
    out = out or sys.stdout
    if fmt == "json":
        json.dump(payload, out, indent=2, sort_keys=True)
        out.write("\n")
        return
    rows = rows_fn(payload)
    if not rows:
        return
    columns = list(rows[0].keys())
    if fmt == "csv":
        import csv as _csv

        writer = _csv.DictWriter(out, fieldnames=columns)
        writer.writeheader()
        writer.writerows(rows)
        return
    cells = [[_fmt(r[c]) for c in columns] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(columns)]
    out.write("  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip() + "\n")
    out.write("  ".join("-" * w for w in widths) + "\n")
    for row in cells:
        out.write("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() + "\n")


def _metric_spec(args) -> MetricSpec:
    if args.metric == "minkowski":
        return MetricSpec("minkowski", p=args.p if args.p is not None else 3.0)
    return MetricSpec(args.metric)


def _classifier_spec(args) -> ClassifierSpec:
    if args.metric == "jaccard":
        return ClassifierSpec(family="token_jaccard")
    return ClassifierSpec(
        family="embedding_metric",
        metric=_metric_spec(args),
        normalize_inputs=not args.no_normalize,
        covariance_method=args.covariance_method,
        shrinkage_lambda=args.shrinkage_lambda,
    )


def _predictions(args) -> list:
    spec = _classifier_spec(args)
    if spec.family == "token_jaccard":
        if not args.dataset:
            raise RiskrankError("--metric jaccard needs --dataset for item texts")
        dataset = rio.load_dataset(args.dataset)
        return classify_all(dataset.items, dataset.labels, spec)
    if not args.fixture or not args.labels:
        raise RiskrankError("embedding metrics need --fixture and --labels")
    items = rio.load_fixture(args.fixture)
    labels = rio.load_fixture(args.labels)
    return classify_all(items, labels, spec)


def cmd_validate(args) -> int:
    dataset = rio.load_dataset(args.dataset)
    violations = validate_dataset(dataset)
    payload = {
        "valid": not violations,
        "violations": [
            {"code": v.code, "item_id": v.item_id, "message": v.message} for v in violations
        ],
    }
    emit(payload, lambda p: p["violations"] or [{"code": "-", "item_id": "-", "message": "dataset is valid"}], args.format)
    return 1 if violations else 0


def cmd_classify(args) -> int:
    preds = _predictions(args)
    payload = {
        "predictions": [
            {"item_id": p.item_id, "predicted": p.predicted, "tie": p.tie} for p in preds
        ]
    }
    emit(payload, lambda p: p["predictions"], args.format)
    return 0


def cmd_evaluate(args) -> int:
    if not args.dataset:
        raise RiskrankError("evaluate needs --dataset for gold labels")
    preds = _predictions(args)
    dataset = rio.load_dataset(args.dataset)
    gold = {it.id: it.gold for it in dataset.items}
    missing = [p.item_id for p in preds if p.item_id not in gold]
    if missing:
        raise RiskrankError(f"no gold label for items: {missing[:3]}")
    cm = confusion([gold[p.item_id] for p in preds], [p.predicted for p in preds])
    rep = report(cm)
    payload = {
        "accuracy": rep.accuracy,
        "macro_precision": rep.macro_precision,
        "macro_recall": rep.macro_recall,
        "macro_f1": rep.macro_f1,
        "per_class": rep.per_class,
        "confusion": {
            "labels": list(cm.labels),
            "counts": cm.counts.tolist(),
        },
    }

    def rows(p):
        out = []
        for lab in CATEGORIES:
            pc = p["per_class"][lab]
            out.append(
                {
                    "class": lab,
                    "precision": _pct(pc["precision"]),
                    "recall": _pct(pc["recall"]),
                    "f1": _pct(pc["f1"]),
                    "support": pc["support"],
                }
            )
        out.append(
            {
                "class": "macro avg / accuracy",
                "precision": _pct(p["macro_precision"]),
                "recall": _pct(p["macro_recall"]),
                "f1": _pct(p["macro_f1"]),
                "support": _pct(p["accuracy"]),
            }
        )
        return out

    emit(payload, rows, args.format)
    return 0


def cmd_crossval(args) -> int:
    if not args.dataset:
        raise RiskrankError("crossval needs --dataset for gold labels")
    dataset = rio.load_dataset(args.dataset)
    spec = _classifier_spec(args)
    plan = make_folds(dataset.ids(), args.k, args.seed)
    if spec.family == "token_jaccard":
        result = run_cv(dataset, None, dataset.labels, spec, plan, model_name=args.metric)
    else:
        if not args.fixture or not args.labels:
            raise RiskrankError("embedding metrics need --fixture and --labels")
        items = rio.load_fixture(args.fixture)
        labels = rio.load_fixture(args.labels)
        result = run_cv(dataset, items, labels, spec, plan, model_name=args.metric)
    payload = rio.cv_result_to_dict(result, plan)

    def rows(p):
        return [
            {"fold": i, "accuracy": a} for i, a in enumerate(p["fold_accuracies"])
        ] + [{"fold": "mean/std", "accuracy": f"{p['mean']:.6g} / {p['std']:.6g}"}]

    emit(payload, rows, args.format)
    return 0


def cmd_compare(args) -> int:
    with open(args.a, encoding="utf-8") as fh:
        res_a = rio.cv_result_from_dict(json.load(fh))
    with open(args.b, encoding="utf-8") as fh:
        res_b = rio.cv_result_from_dict(json.load(fh))
    cfg = TestConfig(args.alpha, args.d_threshold, args.d_variant)
    res = paired_t_test(res_a.fold_accuracies, res_b.fold_accuracies, cfg)
    payload = {
        "model_1": res_a.model_name,
        "model_2": res_b.model_name,
        "t_stat": res.t_stat,
        "p_value": res.p_value,
        "df": res.df,
        "cohens_d_paired": res.cohens_d_paired,
        "cohens_d_pooled": res.cohens_d_pooled,
        "decision": res.decision,
    }
    emit(payload, lambda p: [p], args.format)
    return 0


def cmd_rank(args) -> int:
    survey = rio.load_survey(args.survey)
    result = rank_factors(survey)
    payload = {
        "per_factor": result.per_factor,
        "tie_breaks_applied": list(result.tie_breaks_applied),
    }

    def rows(p):
        items = list(p["per_factor"].items())
        if args.order == "rank":
            items.sort(key=lambda kv: kv[1]["final_rank"])
        else:
            items.sort(key=lambda kv: kv[0])
        return [{"factor": f, "rank": info["final_rank"]} for f, info in items]

    emit(payload, rows, args.format)
    return 0


def cmd_describe(args) -> int:
    survey = rio.load_survey(args.survey)
    stats = describe_factors(survey)
    payload = {"factors": stats}

    def quart(v: float):
        return int(v) if v == int(v) else v

    def rows(p):
        return [
            {
                "factor": s["factor"],
                "mean": f"{s['mean']:.2f}",
                "std": f"{s['std']:.2f}",
                "min": int(s["min"]),
                "q25": quart(s["q25"]),
                "q50": quart(s["q50"]),
                "q75": quart(s["q75"]),
                "max": int(s["max"]),
            }
            for s in p["factors"]
        ]

    emit(payload, rows, args.format)
    return 0


def cmd_run_all(args) -> int:
    config_path = args.config or os.environ.get("RISKRANK_CONFIG")
    if not config_path:
        raise RiskrankError("run-all needs --config or RISKRANK_CONFIG")
    config = load_config(config_path)
    if args.output:
        from dataclasses import replace

        config = replace(config, output_dir=args.output)
    bundle = run_experiment(config)
    payload = {
        "config_hash": bundle.config_hash,
        "output_dir": config.output_dir,
        "files": bundle.written,
        "models": {
            slug: {"accuracy": run.report.accuracy} for slug, run in bundle.models.items()
        },
    }
    emit(
        payload,
        lambda p: [
            {"model": slug, "accuracy": info["accuracy"]} for slug, info in p["models"].items()
        ],
        args.format,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="riskrank",
        description="Zero-shot risk-factor classification benchmark and survey ranking",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--format", choices=("table", "json", "csv"), default="table")

    def add_classify_flags(p):
        p.add_argument("--fixture", help="item embedding fixture (.jsonl)")
        p.add_argument("--labels", help="label embedding fixture (.jsonl)")
        p.add_argument("--dataset", help="dataset manifest (.json)")
        p.add_argument("--metric", choices=_METRICS, required=True)
        p.add_argument("--p", type=float, default=None, help="Minkowski order (default 3)")
        p.add_argument("--no-normalize", action="store_true")
        p.add_argument(
            "--covariance-method",
            choices=("exact_inverse", "pseudo_inverse", "shrinkage"),
            default="pseudo_inverse",
        )
        p.add_argument("--shrinkage-lambda", type=float, default=0.1)

    p = sub.add_parser("validate", help="check dataset invariants")
    p.add_argument("--dataset", required=True)
    add_common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("classify", help="predict a label per item")
    add_classify_flags(p)
    add_common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("evaluate", help="classify and score against gold labels")
    add_classify_flags(p)
    add_common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("crossval", help="k-fold cross-validated accuracies")
    add_classify_flags(p)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--seed", type=int, default=20240501)
    add_common(p)
    p.set_defaults(func=cmd_crossval)

    p = sub.add_parser("compare", help="paired t-test between two crossval JSON results")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--d-threshold", type=float, default=0.5)
    p.add_argument("--d-variant", choices=("pooled", "paired"), default="pooled")
    add_common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("rank", help="mode-based factor ranking from a survey CSV")
    p.add_argument("--survey", required=True)
    p.add_argument("--order", choices=("name", "rank"), default="name")
    add_common(p)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("describe", help="descriptive statistics per survey factor")
    p.add_argument("--survey", required=True)
    add_common(p)
    p.set_defaults(func=cmd_describe)

    p = sub.add_parser("run-all", help="run the full experiment from a config file")
    p.add_argument("--config", help="TOML config (or RISKRANK_CONFIG env var)")
    p.add_argument("--output", help="override the output directory")
    add_common(p)
    p.set_defaults(func=cmd_run_all)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (RiskrankError, OSError, TimeoutError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""End-to-end experiment: run all classifier variants, evaluate, cross-
validate, compare pairwise, and rank the survey, writing one bundle per run.

Bundle layout: one directory per run, one file per table analogue, plus a
manifest stamped with the config hash and seed. Everything except the
manifest's ``created`` timestamp is byte-deterministic for a fixed config.
"""

from __future__ import annotations

import csv
import hashlib
import itertools
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import io as rio
from .classifier import ClassifierSpec, classify_all
from .core import Dataset, EmbeddingSet
from .crossval import make_folds, run_cv
from .errors import ParamError, RiskrankError
from .evaluation import ClassificationReport, ConfusionMatrix, confusion, macro_table, report
from .ranking import describe_factors, rank_factors
from .stats import TestConfig, paired_t_test
from .vecmetrics import MetricSpec

DISPLAY_NAMES = {
    "bert_cosine": "BERT+Cosine Similarity",
    "nltk_jaccard": "NLTK+Jaccard Similarity",
    "st_cosine": "Sentence Transformer+Cosine Similarity",
    "st_euclidean": "Sentence Transformer+Euclidean Distance",
    "st_manhattan": "Sentence Transformer+Manhattan Distance",
    "st_mahalanobis": "Sentence Transformer+Mahalanobis Distance",
    "st_minkowski": "Sentence Transformer+Minkowski Distance",
    "st_bray_curtis": "Sentence Transformer+Bray Curtis Distance",
}

_METRIC_SLUGS = {
    "cosine": "st_cosine",
    "euclidean": "st_euclidean",
    "manhattan": "st_manhattan",
    "mahalanobis": "st_mahalanobis",
    "minkowski": "st_minkowski",
    "bray_curtis": "st_bray_curtis",
}


@dataclass(frozen=True)
class ExperimentConfig:
    dataset_manifest: str
    st_items: str
    st_labels: str
    bert_items: str
    bert_labels: str
    st_labels_cosine: str | None = None
    token_jaccard: bool = True
    metrics: tuple[str, ...] = (
        "cosine",
        "euclidean",
        "manhattan",
        "mahalanobis",
        "minkowski",
        "bray_curtis",
    )
    minkowski_p: float = 3.0
    covariance_method: str = "pseudo_inverse"
    shrinkage_lambda: float = 0.1
    cv_k: int = 10
    cv_seed: int = 20240501
    alpha: float = 0.05
    d_threshold: float = 0.5
    d_variant: str = "pooled"
    survey_csv: str | None = None
    output_dir: str = "out"

    def __post_init__(self) -> None:
        if not self.metrics:
            raise ParamError("metric list must be non-empty")
        unknown = [m for m in self.metrics if m not in _METRIC_SLUGS]
        if unknown:
            raise ParamError(f"unknown metrics in config: {unknown}")

    def semantic_dict(self) -> dict:
        """Fields that influence results; the output directory is excluded."""
        return {
            "dataset_manifest": self.dataset_manifest,
            "st_items": self.st_items,
            "st_labels": self.st_labels,
            "st_labels_cosine": self.st_labels_cosine,
            "bert_items": self.bert_items,
            "bert_labels": self.bert_labels,
            "token_jaccard": self.token_jaccard,
            "metrics": list(self.metrics),
            "minkowski_p": self.minkowski_p,
            "covariance_method": self.covariance_method,
            "shrinkage_lambda": self.shrinkage_lambda,
            "cv_k": self.cv_k,
            "cv_seed": self.cv_seed,
            "alpha": self.alpha,
            "d_threshold": self.d_threshold,
            "d_variant": self.d_variant,
            "survey_csv": self.survey_csv,
        }


def config_hash(config: ExperimentConfig) -> str:
    canon = json.dumps(config.semantic_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def load_config(path) -> ExperimentConfig:
    """Read an ExperimentConfig from a TOML file; keys documented in README."""
    with open(path, "rb") as fh:
        raw = tomllib.load(fh)
    dataset = raw.get("dataset", {})
    fixtures = raw.get("fixtures", {})
    models = raw.get("models", {})
    cv = raw.get("cv", {})
    test = raw.get("test", {})
    survey = raw.get("survey", {})
    output = raw.get("output", {})
    try:
        return ExperimentConfig(
            dataset_manifest=dataset["manifest"],
            st_items=fixtures["st_items"],
            st_labels=fixtures["st_labels"],
            st_labels_cosine=fixtures.get("st_labels_cosine"),
            bert_items=fixtures["bert_items"],
            bert_labels=fixtures["bert_labels"],
            token_jaccard=models.get("token_jaccard", True),
            metrics=tuple(models.get("metrics", ExperimentConfig.metrics)),
            minkowski_p=float(models.get("minkowski_p", 3.0)),
            covariance_method=models.get("covariance_method", "pseudo_inverse"),
            shrinkage_lambda=float(models.get("shrinkage_lambda", 0.1)),
            cv_k=int(cv.get("k", 10)),
            cv_seed=int(cv.get("seed", 20240501)),
            alpha=float(test.get("alpha", 0.05)),
            d_threshold=float(test.get("d_threshold", 0.5)),
            d_variant=test.get("d_variant", "pooled"),
            survey_csv=survey.get("csv"),
            output_dir=output.get("dir", "out"),
        )
    except KeyError as e:
        raise ParamError(f"{path}: config missing required key {e}") from e


@dataclass
class ModelRun:
    slug: str
    name: str
    predictions: list
    cm: ConfusionMatrix
    report: ClassificationReport


@dataclass
class ExperimentBundle:
    config_hash: str
    models: dict[str, ModelRun]
    macro_rows: list[dict]
    cv_results: dict[str, object]
    pairwise: list[dict]
    ranking: object | None = None
    descriptive: list[dict] | None = None
    survey_quality: dict | None = None
    written: list[str] = field(default_factory=list)


def _model_variants(config: ExperimentConfig, bundle_inputs: dict) -> list[tuple[str, dict]]:
    """Ordered (slug, run inputs) pairs for every enabled variant."""
    variants: list[tuple[str, dict]] = []
    variants.append(
        (
            "bert_cosine",
            {
                "family": "embedding_metric",
                "items": bundle_inputs["bert_items"],
                "labels": bundle_inputs["bert_labels"],
                "metric": MetricSpec("cosine"),
            },
        )
    )
    if config.token_jaccard:
        variants.append(("nltk_jaccard", {"family": "token_jaccard"}))
    for metric in config.metrics:
        slug = _METRIC_SLUGS[metric]
        labels = bundle_inputs["st_labels"]
        if metric == "cosine" and bundle_inputs.get("st_labels_cosine") is not None:
            labels = bundle_inputs["st_labels_cosine"]
        spec_kwargs = {"kind": metric}
        if metric == "minkowski":
            spec_kwargs["p"] = config.minkowski_p
        variants.append(
            (
                slug,
                {
                    "family": "embedding_metric",
                    "items": bundle_inputs["st_items"],
                    "labels": labels,
                    "metric": MetricSpec(**spec_kwargs),
                },
            )
        )
    return variants


def _classifier_spec(config: ExperimentConfig, variant: dict) -> ClassifierSpec:
    if variant["family"] == "token_jaccard":
        return ClassifierSpec(family="token_jaccard")
    return ClassifierSpec(
        family="embedding_metric",
        metric=variant["metric"],
        covariance_method=config.covariance_method,
        shrinkage_lambda=config.shrinkage_lambda,
    )


def run_experiment(config: ExperimentConfig, write: bool = True) -> ExperimentBundle:
    """Execute every stage; any module error aborts naming the failing stage."""
    stage = "load-inputs"
    try:
        dataset = rio.load_dataset(config.dataset_manifest)
        inputs = {
            "st_items": rio.load_fixture(config.st_items),
            "st_labels": rio.load_fixture(config.st_labels),
            "bert_items": rio.load_fixture(config.bert_items),
            "bert_labels": rio.load_fixture(config.bert_labels),
            "st_labels_cosine": (
                rio.load_fixture(config.st_labels_cosine) if config.st_labels_cosine else None
            ),
        }

        stage = "classify-evaluate"
        gold = {it.id: it.gold for it in dataset.items}
        models: dict[str, ModelRun] = {}
        for slug, variant in _model_variants(config, inputs):
            spec = _classifier_spec(config, variant)
            if variant["family"] == "token_jaccard":
                preds = classify_all(dataset.items, dataset.labels, spec)
            else:
                preds = classify_all(variant["items"], variant["labels"], spec)
            cm = confusion([gold[p.item_id] for p in preds], [p.predicted for p in preds])
            models[slug] = ModelRun(slug, DISPLAY_NAMES[slug], preds, cm, report(cm))

        stage = "macro-table"
        macro_rows = macro_table({run.name: run.report for run in models.values()})

        stage = "cross-validation"
        plan = make_folds(dataset.ids(), config.cv_k, config.cv_seed)
        cv_results = {}
        for slug, variant in _model_variants(config, inputs):
            spec = _classifier_spec(config, variant)
            items = variant.get("items")
            labels = variant.get("labels", dataset.labels)
            cv_results[slug] = run_cv(
                dataset, items, labels, spec, plan, model_name=DISPLAY_NAMES[slug]
            )

        stage = "pairwise-tests"
        tcfg = TestConfig(config.alpha, config.d_threshold, config.d_variant)
        pairwise = []
        for a, b in itertools.combinations(models.keys(), 2):
            res = paired_t_test(
                cv_results[a].fold_accuracies, cv_results[b].fold_accuracies, tcfg
            )
            pairwise.append(
                {
                    "model_1": DISPLAY_NAMES[a],
                    "model_2": DISPLAY_NAMES[b],
                    "t_stat": res.t_stat,
                    "p_value": res.p_value,
                    "df": res.df,
                    "cohens_d_paired": res.cohens_d_paired,
                    "cohens_d_pooled": res.cohens_d_pooled,
                    "decision": res.decision,
                }
            )

        ranking = None
        descriptive_rows = None
        quality = None
        if config.survey_csv:
            stage = "survey-ranking"
            survey = rio.load_survey(config.survey_csv)
            ranking = rank_factors(survey)
            descriptive_rows = describe_factors(survey)
            quality = {
                "participants": survey.participants,
                "non_permutation_rows": len(survey.permutation_violations()),
            }

        bundle = ExperimentBundle(
            config_hash=config_hash(config),
            models=models,
            macro_rows=macro_rows,
            cv_results=cv_results,
            pairwise=pairwise,
            ranking=ranking,
            descriptive=descriptive_rows,
            survey_quality=quality,
        )
        if write:
            stage = "write-bundle"
            _write_bundle(config, bundle, plan)
        return bundle
    except RiskrankError as e:
        raise type(e)(f"[stage: {stage}] {e}") from e


def _json_dump(path: Path, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_bundle(config: ExperimentConfig, bundle: ExperimentBundle, plan) -> None:
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[str] = []

    def track(path: Path) -> Path:
        written.append(path.name)
        return path

    for slug, run in bundle.models.items():
        _json_dump(
            track(out / f"report_{slug}.json"),
            {
                "model": run.name,
                "accuracy": run.report.accuracy,
                "per_class": run.report.per_class,
                "macro_precision": run.report.macro_precision,
                "macro_recall": run.report.macro_recall,
                "macro_f1": run.report.macro_f1,
                "predictions": [
                    {"item_id": p.item_id, "predicted": p.predicted, "tie": p.tie}
                    for p in run.predictions
                ],
            },
        )
        with open(track(out / f"confusion_{slug}.csv"), "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["gold\\predicted", *run.cm.labels])
            for i, lab in enumerate(run.cm.labels):
                writer.writerow([lab, *run.cm.counts[i].tolist()])

    _json_dump(track(out / "macro_table.json"), bundle.macro_rows)
    with open(track(out / "macro_table.csv"), "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(
            fh, fieldnames=["model", "macro_precision", "macro_recall", "macro_f1"],
            extrasaction="ignore",
        )
        writer.writeheader()
        writer.writerows(bundle.macro_rows)

    _json_dump(
        track(out / "cv_results.json"),
        {slug: rio.cv_result_to_dict(res, plan) for slug, res in bundle.cv_results.items()},
    )

    _json_dump(track(out / "pairwise_tests.json"), bundle.pairwise)
    with open(track(out / "pairwise_tests.csv"), "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(
            fh,
            fieldnames=[
                "model_1", "model_2", "t_stat", "p_value", "df",
                "cohens_d_paired", "cohens_d_pooled", "decision",
            ],
        )
        writer.writeheader()
        writer.writerows(bundle.pairwise)

    if bundle.ranking is not None:
        ranked = bundle.ranking.per_factor
        _json_dump(
            track(out / "ranking.json"),
            {
                "per_factor": ranked,
                "tie_breaks_applied": list(bundle.ranking.tie_breaks_applied),
            },
        )
        with open(track(out / "ranking.csv"), "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["factor", "rank", "mode_value", "mode_count", "multimodal"])
            for factor in sorted(ranked):
                info = ranked[factor]
                writer.writerow(
                    [factor, info["final_rank"], info["mode_value"],
                     info["mode_count"], info["multimodal"]]
                )
        _json_dump(track(out / "descriptive.json"), bundle.descriptive)
        with open(track(out / "descriptive.csv"), "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(
                fh, fieldnames=["factor", "mean", "std", "min", "q25", "q50", "q75", "max"]
            )
            writer.writeheader()
            writer.writerows(bundle.descriptive)
        _json_dump(track(out / "data_quality.json"), bundle.survey_quality)

    _json_dump(
        out / "manifest.json",
        {
            "config_hash": bundle.config_hash,
            "cv_seed": config.cv_seed,
            "created": datetime.now(timezone.utc).isoformat(),
            "files": sorted(written),
        },
    )
    bundle.written = sorted(written) + ["manifest.json"]

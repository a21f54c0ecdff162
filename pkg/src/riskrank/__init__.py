"""riskrank: zero-shot risk-factor classification benchmark and
mode-based survey ranking toolkit."""

from .core import CATEGORIES, Dataset, EmbeddingSet, LabeledItem, LabelSet, validate_dataset
from .classifier import ClassifierSpec, Prediction, classify_all
from .crossval import CvResult, FoldPlan, make_folds, run_cv
from .evaluation import ClassificationReport, ConfusionMatrix, confusion, macro_table, report
from .ranking import RankingResult, SurveyMatrix, describe_factors, mode_of, rank_factors
from .stats import PairedTestResult, TestConfig, descriptive, paired_t_test, t_cdf
from .textsim import jaccard, tokenize
from .vecmetrics import (
    CovarianceModel,
    MetricSpec,
    bray_curtis,
    cosine,
    estimate_covariance,
    euclidean,
    l2_normalize,
    mahalanobis,
    manhattan,
    minkowski,
    pairwise,
)

__version__ = "0.1.0"

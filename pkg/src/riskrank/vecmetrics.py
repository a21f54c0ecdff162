"""Vector similarity and distance metrics, plus covariance estimation.

All functions accumulate in float64 and are deterministic for identical
inputs. The scalar kernels here are the single source of truth: ``pairwise``
calls them element by element, so a matrix entry always equals the
corresponding scalar call.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import EmbeddingSet, as_vector
from .errors import DegenerateError, DimError, ParamError, SingularError

#: metric kinds where larger is more similar (classifier uses argmax)
SIMILARITY_KINDS = frozenset({"cosine"})

#: metric kinds where smaller is more similar (classifier uses argmin)
DISTANCE_KINDS = frozenset(
    {"euclidean", "manhattan", "minkowski", "bray_curtis", "mahalanobis"}
)

METRIC_KINDS = SIMILARITY_KINDS | DISTANCE_KINDS


def _pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    a = as_vector(a, name="a")
    b = as_vector(b, name="b")
    if a.shape[0] != b.shape[0]:
        raise DimError(f"dim mismatch: {a.shape[0]} vs {b.shape[0]}")
    return a, b


def l2_normalize(v) -> np.ndarray:
    """Scale ``v`` to unit Euclidean length.

    Raises
    ------
    ZeroNormError
        If ``v`` has zero norm.
    """
    from .errors import ZeroNormError

    v = as_vector(v)
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise ZeroNormError("cannot normalize a zero vector")
    return v / norm


def cosine(a, b) -> float:
    """Cosine of the angle between two vectors.

    .. math:: \\frac{\\sum_i a_i b_i}{\\sqrt{\\sum_i a_i^2}\\sqrt{\\sum_i b_i^2}}

    The result is clamped to [-1, 1] to absorb floating-point rounding.
    Raises ``ZeroNormError`` if either operand has zero norm.
    """
    from .errors import ZeroNormError

    a, b = _pair(a, b)
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise ZeroNormError("cosine is undefined for zero-norm vectors")
    return float(np.clip(np.dot(a, b) / (na * nb), -1.0, 1.0))


def euclidean(a, b) -> float:
    """Straight-line (L2) distance: sqrt of the sum of squared differences."""
    a, b = _pair(a, b)
    d = a - b
    return float(np.sqrt(np.sum(d * d)))


def manhattan(a, b) -> float:
    """L1 distance: the sum of absolute component-wise differences."""
    a, b = _pair(a, b)
    return float(np.sum(np.abs(a - b)))


def minkowski(a, b, p: float) -> float:
    """Order-``p`` Minkowski distance ``(sum |a_i - b_i|^p)^(1/p)``.

    Reduces to Euclidean at p=2 and Manhattan at p=1. ``p`` must be a finite
    positive real; values below 1 are accepted (the paper family only uses
    p >= 1) but no triangle inequality holds there.
    """
    if not np.isfinite(p) or p <= 0:
        raise ParamError(f"minkowski order must be finite and > 0, got {p}")
    a, b = _pair(a, b)
    return float(np.sum(np.abs(a - b) ** p) ** (1.0 / p))


def bray_curtis(a, b) -> float:
    """Bray-Curtis dissimilarity ``sum |a_i - b_i| / sum |a_i + b_i|``.

    The denominator is the sum of absolute values of the component-wise
    sums, exactly as printed in the defining formula; on inputs with negative
    components this differs from the abs-of-sum variant. A vanishing
    denominator raises ``DegenerateError``.
    """
    a, b = _pair(a, b)
    denom = float(np.sum(np.abs(a + b)))
    if denom == 0.0:
        raise DegenerateError("bray_curtis denominator is zero")
    return float(np.sum(np.abs(a - b)) / denom)


@dataclass(frozen=True)
class CovarianceModel:
    """Sample mean plus a (pseudo-)inverse covariance matrix.

    ``inverse`` must be symmetric (1e-9 relative) and positive semi-definite
    up to -1e-9 * max eigenvalue; both are checked at construction.
    """

    mean: np.ndarray
    inverse: np.ndarray
    source_count: int
    method: str
    shrinkage_lambda: float | None = None

    def __post_init__(self) -> None:
        mean = as_vector(self.mean, name="mean")
        inv = np.array(self.inverse, dtype=np.float64)
        if inv.ndim != 2 or inv.shape[0] != inv.shape[1]:
            raise DimError("inverse covariance must be square")
        if inv.shape[0] != mean.shape[0]:
            raise DimError("mean and inverse covariance dims disagree")
        scale = float(np.max(np.abs(inv))) or 1.0
        if float(np.max(np.abs(inv - inv.T))) > 1e-9 * scale:
            raise ParamError("inverse covariance is not symmetric within 1e-9 relative")
        eigvals = np.linalg.eigvalsh(inv)
        top = float(eigvals[-1])
        if top > 0 and float(eigvals[0]) < -1e-9 * top:
            raise ParamError("inverse covariance has a significantly negative eigenvalue")
        mean.setflags(write=False)
        inv.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "inverse", inv)

    @property
    def dim(self) -> int:
        return self.mean.shape[0]


def estimate_covariance(
    vectors,
    method: str = "pseudo_inverse",
    shrinkage_lambda: float = 0.1,
) -> CovarianceModel:
    """Fit mean and inverted sample covariance from row vectors.

    The covariance uses the unbiased n-1 denominator. Inversion methods:

    - ``exact_inverse``: plain inverse; fails with ``SingularError`` when the
      2-norm condition number exceeds 1e12.
    - ``pseudo_inverse``: eigendecomposition, eigenvalues below
      ``dim * eps * max_eigenvalue`` treated as zero (Moore-Penrose).
    - ``shrinkage``: ``(1-lam) * S + lam * (tr(S)/dim) * I`` then exact
      inverse; ``lam`` in (0, 1].
    """
    rows = [as_vector(v) for v in vectors]
    if len(rows) < 2:
        raise ParamError("covariance estimation needs at least 2 vectors")
    dims = {r.shape[0] for r in rows}
    if len(dims) != 1:
        raise DimError(f"vectors have mixed dims: {sorted(dims)}")
    x = np.vstack(rows)
    n, dim = x.shape
    mean = x.mean(axis=0)
    centered = x - mean
    cov = (centered.T @ centered) / (n - 1)

    if method == "exact_inverse":
        if np.linalg.cond(cov) > 1e12:
            raise SingularError("covariance condition number exceeds 1e12")
        inv = np.linalg.inv(cov)
        inv = (inv + inv.T) / 2.0
        lam = None
    elif method == "pseudo_inverse":
        eigvals, eigvecs = np.linalg.eigh(cov)
        tol = dim * np.finfo(np.float64).eps * max(float(eigvals[-1]), 0.0)
        inv_vals = np.where(eigvals > tol, 1.0 / np.where(eigvals > tol, eigvals, 1.0), 0.0)
        inv = (eigvecs * inv_vals) @ eigvecs.T
        inv = (inv + inv.T) / 2.0
        lam = None
    elif method == "shrinkage":
        if not 0.0 < shrinkage_lambda <= 1.0:
            raise ParamError("shrinkage lambda must be in (0, 1]")
        target = (np.trace(cov) / dim) * np.eye(dim)
        shrunk = (1.0 - shrinkage_lambda) * cov + shrinkage_lambda * target
        if np.trace(cov) == 0.0 or np.linalg.cond(shrunk) > 1e12:
            raise SingularError("shrunk covariance is still singular")
        inv = np.linalg.inv(shrunk)
        inv = (inv + inv.T) / 2.0
        lam = shrinkage_lambda
    else:
        raise ParamError(f"unknown covariance method {method!r}")

    return CovarianceModel(mean, inv, n, method, lam)


def mahalanobis(x, model: CovarianceModel) -> float:
    """Distance from ``x`` to the model mean under the inverse covariance.

    ``sqrt((x - mu)^T Sigma^-1 (x - mu))``; the quadratic form is clamped at
    zero before the square root to absorb rounding on semi-definite inverses.
    """
    x = as_vector(x, name="x")
    if x.shape[0] != model.dim:
        raise DimError(f"dim mismatch: x has {x.shape[0]}, model has {model.dim}")
    d = x - model.mean
    q = float(d @ model.inverse @ d)
    return float(np.sqrt(max(q, 0.0)))


def mahalanobis_between(a, b, model: CovarianceModel) -> float:
    """Mahalanobis distance between two points under the model's inverse."""
    a, b = _pair(a, b)
    if a.shape[0] != model.dim:
        raise DimError(f"dim mismatch: vectors have {a.shape[0]}, model has {model.dim}")
    d = a - b
    q = float(d @ model.inverse @ d)
    return float(np.sqrt(max(q, 0.0)))


@dataclass(frozen=True)
class MetricSpec:
    """Which metric to evaluate, with its parameters.

    ``p`` is required iff kind is ``minkowski`` (the benchmark default is 3);
    ``covariance`` is required iff kind is ``mahalanobis``.
    """

    kind: str
    p: float | None = None
    covariance: CovarianceModel | None = None

    def __post_init__(self) -> None:
        if self.kind not in METRIC_KINDS:
            raise ParamError(f"unknown metric kind {self.kind!r}")
        if self.kind == "minkowski":
            if self.p is None:
                raise ParamError("minkowski requires p")
            if not np.isfinite(self.p) or self.p <= 0:
                raise ParamError(f"minkowski order must be finite and > 0, got {self.p}")
        elif self.p is not None:
            raise ParamError(f"p is only meaningful for minkowski, not {self.kind}")

    @property
    def is_similarity(self) -> bool:
        return self.kind in SIMILARITY_KINDS


def metric_value(a, b, spec: MetricSpec) -> float:
    """Evaluate one metric for a single pair of vectors."""
    if spec.kind == "cosine":
        return cosine(a, b)
    if spec.kind == "euclidean":
        return euclidean(a, b)
    if spec.kind == "manhattan":
        return manhattan(a, b)
    if spec.kind == "minkowski":
        return minkowski(a, b, spec.p)
    if spec.kind == "bray_curtis":
        return bray_curtis(a, b)
    if spec.kind == "mahalanobis":
        if spec.covariance is None:
            raise ParamError("mahalanobis metric requires a fitted covariance model")
        return mahalanobis_between(a, b, spec.covariance)
    raise ParamError(f"unknown metric kind {spec.kind!r}")


def pairwise(set_a: EmbeddingSet, set_b: EmbeddingSet, spec: MetricSpec) -> np.ndarray:
    """Matrix of metric values: entry (i, j) = metric(a_i, b_j).

    Element (i, j) is computed by the same scalar kernel as a direct call,
    so results are identical however the matrix is consumed.
    """
    if set_a.dim != set_b.dim:
        raise DimError(f"embedding dims disagree: {set_a.dim} vs {set_b.dim}")
    out = np.empty((len(set_a), len(set_b)), dtype=np.float64)
    for i in range(len(set_a)):
        for j in range(len(set_b)):
            out[i, j] = metric_value(set_a.matrix[i], set_b.matrix[j], spec)
    return out

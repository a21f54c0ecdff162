"""Persistent formats: embedding fixtures, dataset manifests, survey CSVs,
cross-validation results, and the optional remote embedding client.

The fixture format is line-oriented JSON: one header object, then one object
per record. Vectors are stored as JSON decimal text (Python's shortest
round-trip float representation), so parse(write(x)) is bit-exact.
"""

from __future__ import annotations

import csv
import json
import socket
import urllib.error
import urllib.request
import warnings
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from .core import EmbeddingSet
from .corpus import SURVEY_FACTOR_NAMES
from .crossval import CvResult, FoldPlan
from .errors import ParamError, ParseError, RangeError, RemoteError, SchemaError
from .ranking import RANK_MAX, RANK_MIN, SurveyMatrix

_HEADER_FIELDS = ("model_id", "dim", "normalized", "created")


def write_fixture(path, embeddings: EmbeddingSet, created: str | None = None,
                  extra_header: dict | None = None) -> None:
    """Write an EmbeddingSet as header line + one JSON record per vector."""
    header = {
        "model_id": embeddings.model_id,
        "dim": embeddings.dim,
        "normalized": embeddings.normalized,
        "created": created or datetime.now(timezone.utc).isoformat(),
    }
    if extra_header:
        header.update(extra_header)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(header) + "\n")
        for i, item_id in enumerate(embeddings.ids):
            rec = {
                "id": item_id,
                "text": embeddings.texts[i],
                "vector": embeddings.matrix[i].tolist(),
            }
            fh.write(json.dumps(rec) + "\n")


def load_fixture(path) -> EmbeddingSet:
    """Parse and validate a fixture file.

    The header's ``normalized`` flag is checked against the actual norms
    (tolerance 1e-6) and corrected with a warning when wrong. Malformed lines
    raise ``ParseError`` with the line number; wrong vector lengths raise
    ``SchemaError``.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ParseError(f"{path}: empty fixture file")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}:1: bad header JSON: {e}") from e
    missing = [f for f in _HEADER_FIELDS if f not in header]
    if missing:
        raise SchemaError(f"{path}: header missing fields {missing}")
    dim = header["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise SchemaError(f"{path}: header dim must be a positive integer")

    ids, texts, rows = [], [], []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as e:
            raise ParseError(f"{path}:{lineno}: bad record JSON: {e}") from e
        if not isinstance(rec, dict) or {"id", "text", "vector"} - set(rec):
            raise ParseError(f"{path}:{lineno}: record needs id, text, vector")
        vec = rec["vector"]
        if len(vec) != dim:
            raise SchemaError(
                f"{path}:{lineno}: vector length {len(vec)} != header dim {dim}"
            )
        if rec["id"] in ids:
            raise SchemaError(f"{path}:{lineno}: duplicate id {rec['id']!r}")
        ids.append(rec["id"])
        texts.append(rec["text"])
        rows.append(vec)

    if not ids:
        warnings.warn(f"{path}: fixture has no records")
        matrix = np.empty((0, dim), dtype=np.float64)
    else:
        matrix = np.array(rows, dtype=np.float64)

    normalized = bool(header["normalized"])
    if len(ids):
        norms = np.linalg.norm(matrix, axis=1)
        actually = bool(np.all(np.abs(norms - 1.0) <= 1e-6))
        if normalized != actually:
            warnings.warn(
                f"{path}: header says normalized={normalized} but vectors say "
                f"{actually}; using the measured value"
            )
            normalized = actually
    return EmbeddingSet(ids, texts, matrix, header["model_id"], normalized)


def write_dataset(path, dataset) -> None:
    payload = {
        "items": [{"id": it.id, "text": it.text, "gold": it.gold} for it in dataset.items],
        "labels": dict(dataset.labels.texts),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def load_dataset(path):
    from .core import Dataset, LabeledItem, LabelSet

    with open(path, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as e:
            raise ParseError(f"{path}: bad dataset JSON: {e}") from e
    if "items" not in payload or "labels" not in payload:
        raise SchemaError(f"{path}: dataset manifest needs items and labels")
    items = []
    for rec in payload["items"]:
        if {"id", "text", "gold"} - set(rec):
            raise SchemaError(f"{path}: item record needs id, text, gold")
        items.append(LabeledItem(rec["id"], rec["text"], rec["gold"]))
    return Dataset(items=tuple(items), labels=LabelSet(payload["labels"]))


def load_survey(path, expected_factors=None, aliases: dict[str, str] | None = None) -> SurveyMatrix:
    """Read a survey CSV: header of factor names, one row per participant.

    Header names are matched case-insensitively after whitespace trimming
    against the canonical factor names (or ``expected_factors``); ``aliases``
    maps nonstandard spellings to canonical ones. Cells must parse as
    integers in [1, 25]; violations carry the row and column.
    """
    canonical = list(expected_factors) if expected_factors is not None else list(SURVEY_FACTOR_NAMES)
    by_key = {c.strip().lower(): c for c in canonical}
    alias_map = {k.strip().lower(): v for k, v in (aliases or {}).items()}

    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            raw_header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty survey file") from None

        factors = []
        for col, name in enumerate(raw_header):
            key = name.strip().lower()
            key = alias_map.get(key, key).strip().lower()
            if key not in by_key:
                raise SchemaError(
                    f"{path}: unknown factor name {name!r} in column {col + 1}"
                )
            factors.append(by_key[key])
        if len(set(factors)) != len(factors):
            raise SchemaError(f"{path}: duplicate factor columns")
        missing = [c for c in canonical if c not in factors]
        if missing:
            raise SchemaError(f"{path}: survey is missing factors {missing[:3]}...")

        rows = []
        for rownum, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(factors):
                raise ParseError(
                    f"{path}:{rownum}: expected {len(factors)} cells, got {len(row)}"
                )
            parsed = []
            for col, cell in enumerate(row):
                text = cell.strip()
                try:
                    value = int(text)
                except ValueError:
                    raise ParseError(
                        f"{path}:{rownum}: column {col + 1} value {cell!r} is not an integer"
                    ) from None
                if not RANK_MIN <= value <= RANK_MAX:
                    raise RangeError(
                        f"{path}:{rownum}: column {col + 1} value {value} outside "
                        f"[{RANK_MIN}, {RANK_MAX}]"
                    )
                parsed.append(value)
            rows.append(parsed)

    if not rows:
        raise ParseError(f"{path}: survey has a header but no responses")
    return SurveyMatrix(tuple(factors), np.array(rows, dtype=np.int64))


def write_survey(path, survey: SurveyMatrix) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(survey.factors)
        writer.writerows(survey.responses.tolist())


def cv_result_to_dict(result: CvResult, plan: FoldPlan | None = None) -> dict:
    out = {
        "model_name": result.model_name,
        "fold_accuracies": list(result.fold_accuracies),
        "mean": result.mean,
        "std": result.std,
        "k": result.k,
        "seed": result.seed,
    }
    if plan is not None:
        out["plan"] = {"k": plan.k, "seed": plan.seed, "assignments": dict(plan.assignments)}
    return out


def cv_result_from_dict(payload: dict) -> CvResult:
    try:
        return CvResult(
            model_name=payload["model_name"],
            fold_accuracies=tuple(float(a) for a in payload["fold_accuracies"]),
            mean=float(payload["mean"]),
            std=float(payload["std"]),
            k=int(payload["k"]),
            seed=int(payload["seed"]),
        )
    except KeyError as e:
        raise SchemaError(f"cv result payload missing field {e}") from e


@dataclass(frozen=True)
class RemoteEmbedderConfig:
    base_url: str
    timeout_ms: int = 10_000
    batch_size: int = 16

    def __post_init__(self) -> None:
        if self.timeout_ms <= 0:
            raise ParamError("timeout_ms must be > 0")
        if self.batch_size < 1:
            raise ParamError("batch_size must be >= 1")


def fetch_embeddings(texts, config: RemoteEmbedderConfig) -> EmbeddingSet:
    """POST text batches to ``{base_url}/embed`` and assemble an EmbeddingSet.

    Requests go out one batch at a time in input order (determinism over
    throughput at this scale). The endpoint must answer
    ``{"model": str, "dim": int, "vectors": [[...]]}`` with one vector per
    input text.
    """
    texts = list(texts)
    if not texts:
        raise ParamError("fetch_embeddings needs at least one text")
    url = config.base_url.rstrip("/") + "/embed"
    timeout = config.timeout_ms / 1000.0

    model_id = None
    dim = None
    vectors: list[list[float]] = []
    for start in range(0, len(texts), config.batch_size):
        batch = texts[start : start + config.batch_size]
        body = json.dumps({"texts": batch}).encode("utf-8")
        req = urllib.request.Request(
            url, data=body, headers={"Content-Type": "application/json"}
        )
        try:
            with urllib.request.urlopen(req, timeout=timeout) as resp:
                payload = json.loads(resp.read().decode("utf-8"))
        except urllib.error.HTTPError as e:
            raise RemoteError(f"embedding endpoint returned HTTP {e.code}") from e
        except (socket.timeout, TimeoutError) as e:
            raise TimeoutError(f"embedding request timed out after {config.timeout_ms} ms") from e
        except urllib.error.URLError as e:
            if isinstance(e.reason, (socket.timeout, TimeoutError)):
                raise TimeoutError(
                    f"embedding request timed out after {config.timeout_ms} ms"
                ) from e
            raise RemoteError(f"embedding endpoint unreachable: {e.reason}") from e

        if {"model", "dim", "vectors"} - set(payload):
            raise SchemaError("embedding response needs model, dim, vectors")
        if len(payload["vectors"]) != len(batch):
            raise SchemaError(
                f"endpoint returned {len(payload['vectors'])} vectors for {len(batch)} texts"
            )
        if model_id is None:
            model_id, dim = payload["model"], payload["dim"]
        elif payload["model"] != model_id or payload["dim"] != dim:
            raise SchemaError("endpoint changed model or dim between batches")
        vectors.extend(payload["vectors"])

    ids = [f"text-{i}" for i in range(len(texts))]
    return EmbeddingSet(ids, texts, np.array(vectors, dtype=np.float64), model_id)

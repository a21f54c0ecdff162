"""Turn an input manifest into an embedding fixture file.

The output format is the consumer's documented contract: line-oriented JSON
with one header object (model_id, dim, normalized, created, plus pooling for
pooled models) followed by one record per text. Vectors serialize through
JSON's shortest round-trip float text, so reloading is bit-exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from .encoders import MODEL_FAMILIES, build_encoder
from .manifest import ManifestError, load_texts


@dataclass(frozen=True)
class ExportSpec:
    model: str
    manifest_path: str
    output_path: str
    pooling: str = "mean_masked"
    records: str = "all"

    def __post_init__(self) -> None:
        if self.model not in MODEL_FAMILIES:
            raise ValueError(f"unknown model family {self.model!r}")
        allowed = MODEL_FAMILIES[self.model]["pooling"]
        if allowed is None:
            if self.pooling != "mean_masked":  # the unused default
                raise ValueError(f"{self.model} does its own pooling; --pooling not applicable")
        elif self.pooling not in allowed:
            raise ValueError(f"{self.model} supports pooling {allowed}, not {self.pooling!r}")


def run_export(spec: ExportSpec, encoder=None, created: str | None = None) -> dict:
    """Embed every manifest text and write the fixture; returns the header.

    ``encoder`` is injectable so the plumbing can be exercised with a fake;
    by default the real checkpoint for ``spec.model`` is loaded.
    """
    pairs = load_texts(spec.manifest_path, spec.records)
    if not pairs:
        raise ManifestError(f"{spec.manifest_path}: no texts to embed")

    if encoder is None:
        encoder = build_encoder(spec.model, spec.pooling)
    texts = [text for _, text in pairs]
    vectors = np.asarray(encoder.encode(texts), dtype=np.float64)
    if vectors.shape != (len(pairs), encoder.dim):
        raise ValueError(
            f"encoder returned shape {vectors.shape}, expected ({len(pairs)}, {encoder.dim})"
        )
    expected = MODEL_FAMILIES[spec.model]["dim"]
    if encoder.dim != expected:
        raise ValueError(f"{spec.model} must produce dim {expected}, got {encoder.dim}")
    if not np.all(np.isfinite(vectors)):
        raise ValueError("encoder produced non-finite components")

    header = {
        "model_id": encoder.model_id,
        "dim": encoder.dim,
        "normalized": False,
        "created": created or datetime.now(timezone.utc).isoformat(),
    }
    header.update(getattr(encoder, "header_extra", {}))
    with open(spec.output_path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(header) + "\n")
        for (rid, text), row in zip(pairs, vectors):
            fh.write(json.dumps({"id": rid, "text": text, "vector": row.tolist()}) + "\n")
    return header

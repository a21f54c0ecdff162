"""Text encoders backed by pre-trained checkpoints.

Model runtimes are imported lazily so the export plumbing (and its tests)
work without them. Everything runs in inference mode on CPU with a fixed
batching order, so repeated runs on the same machine produce identical
vectors.
"""

from __future__ import annotations

import numpy as np

from .pooling import cls_pool, mean_masked_pool

MODEL_FAMILIES = {
    "paraphrase-MiniLM-L6-v2": {"dim": 384, "pooling": None},
    "bert-base-uncased": {"dim": 768, "pooling": ("mean_masked", "cls")},
}


class CheckpointUnavailable(Exception):
    """The requested checkpoint could not be loaded (offline, missing cache)."""


class SentenceTransformerEncoder:
    """paraphrase-MiniLM-L6-v2 through the sentence-transformers runtime."""

    model_id = "sentence-transformers/paraphrase-MiniLM-L6-v2"
    dim = 384
    header_extra = {}

    def __init__(self):
        try:
            from sentence_transformers import SentenceTransformer
        except ImportError as e:
            raise CheckpointUnavailable(f"sentence-transformers not installed: {e}") from e
        try:
            self._model = SentenceTransformer(self.model_id, device="cpu")
        except Exception as e:
            raise CheckpointUnavailable(
                f"cannot load {self.model_id}: {e}"
            ) from e
        self._model.eval()

    def encode(self, texts: list[str]) -> np.ndarray:
        vectors = self._model.encode(
            list(texts),
            batch_size=32,
            convert_to_numpy=True,
            normalize_embeddings=False,
            show_progress_bar=False,
        )
        return np.asarray(vectors, dtype=np.float64)


class BertEncoder:
    """bert-base-uncased hidden states pooled into sentence vectors."""

    model_id = "bert-base-uncased"
    dim = 768

    def __init__(self, pooling: str = "mean_masked"):
        if pooling not in ("mean_masked", "cls"):
            raise ValueError(f"unsupported bert pooling {pooling!r}")
        self.pooling = pooling
        self.header_extra = {"pooling": pooling}
        try:
            import torch
            from transformers import AutoModel, AutoTokenizer
        except ImportError as e:
            raise CheckpointUnavailable(f"transformers/torch not installed: {e}") from e
        try:
            self._tokenizer = AutoTokenizer.from_pretrained(self.model_id)
            self._model = AutoModel.from_pretrained(self.model_id)
        except Exception as e:
            raise CheckpointUnavailable(f"cannot load {self.model_id}: {e}") from e
        self._torch = torch
        self._model.eval()

    def encode(self, texts: list[str]) -> np.ndarray:
        torch = self._torch
        out = []
        with torch.no_grad():
            for start in range(0, len(texts), 16):
                batch = list(texts[start : start + 16])
                enc = self._tokenizer(
                    batch, padding=True, truncation=True, return_tensors="pt"
                )
                hidden = self._model(**enc).last_hidden_state.numpy()
                mask = enc["attention_mask"].numpy()
                if self.pooling == "mean_masked":
                    out.append(mean_masked_pool(hidden, mask))
                else:
                    out.append(cls_pool(hidden))
        return np.concatenate(out, axis=0)


def build_encoder(model: str, pooling: str = "mean_masked"):
    if model == "paraphrase-MiniLM-L6-v2":
        return SentenceTransformerEncoder()
    if model == "bert-base-uncased":
        return BertEncoder(pooling)
    raise ValueError(f"unknown model family {model!r}")

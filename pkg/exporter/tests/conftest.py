import json

import numpy as np
import pytest


class FakeEncoder:
    """Deterministic stand-in for a checkpoint-backed encoder: vectors are a
    fixed function of the text bytes, so re-encoding is exactly stable."""

    def __init__(self, dim=384, model_id="fake-encoder"):
        self.dim = dim
        self.model_id = model_id
        self.header_extra = {}

    def encode(self, texts):
        out = np.empty((len(texts), self.dim))
        for i, text in enumerate(texts):
            seed = int.from_bytes(text.encode("utf-8")[:8].ljust(8, b"\0"), "big")
            out[i] = np.random.default_rng(seed).normal(size=self.dim)
        return out


@pytest.fixture()
def fake_encoder():
    return FakeEncoder()


@pytest.fixture()
def manifest_path(tmp_path):
    payload = {
        "records": [
            {"id": "working-posture", "text": "Working posture"},
            {"id": "vibration", "text": "Vibration"},
            {"id": "label:personal", "text": "personal"},
        ]
    }
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps(payload))
    return path

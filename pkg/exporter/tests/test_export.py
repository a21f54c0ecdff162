import json
import os
import warnings

import numpy as np
import pytest

from embed_export.export import ExportSpec, run_export
from embed_export.manifest import ManifestError, load_texts

from conftest import FakeEncoder


def test_export_writes_header_and_records(tmp_path, manifest_path, fake_encoder):
    out = tmp_path / "fixture.jsonl"
    spec = ExportSpec("paraphrase-MiniLM-L6-v2", str(manifest_path), str(out))
    header = run_export(spec, encoder=fake_encoder, created="2025-01-01T00:00:00+00:00")
    assert header["dim"] == 384
    assert header["normalized"] is False
    lines = out.read_text().splitlines()
    assert len(lines) == 4  # header + 3 records
    rec = json.loads(lines[1])
    assert rec["id"] == "working-posture"
    assert len(rec["vector"]) == 384


def test_export_passes_consumer_validation_with_zero_warnings(
    tmp_path, manifest_path, fake_encoder
):
    riskrank_io = pytest.importorskip(
        "riskrank.io", reason="consumer package not installed"
    )
    out = tmp_path / "fixture.jsonl"
    spec = ExportSpec("paraphrase-MiniLM-L6-v2", str(manifest_path), str(out))
    run_export(spec, encoder=fake_encoder)
    with warnings.catch_warnings():
        warnings.simplefilter("error")  # any warning fails the test
        emb = riskrank_io.load_fixture(out)
    assert len(emb) == 3 and emb.dim == 384


def test_export_cosine_self_similarity_is_one(tmp_path, manifest_path, fake_encoder):
    riskrank = pytest.importorskip("riskrank")
    out = tmp_path / "fixture.jsonl"
    run_export(
        ExportSpec("paraphrase-MiniLM-L6-v2", str(manifest_path), str(out)),
        encoder=fake_encoder,
    )
    emb = riskrank.io.load_fixture(out) if hasattr(riskrank, "io") else None
    from riskrank.io import load_fixture

    emb = load_fixture(out)
    for row in emb.matrix:
        assert riskrank.cosine(row, row) == pytest.approx(1.0, abs=1e-6)


def test_reexport_is_componentwise_stable(tmp_path, manifest_path, fake_encoder):
    out1, out2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    spec1 = ExportSpec("paraphrase-MiniLM-L6-v2", str(manifest_path), str(out1))
    spec2 = ExportSpec("paraphrase-MiniLM-L6-v2", str(manifest_path), str(out2))
    run_export(spec1, encoder=fake_encoder)
    run_export(spec2, encoder=FakeEncoder())
    a = [json.loads(line)["vector"] for line in out1.read_text().splitlines()[1:]]
    b = [json.loads(line)["vector"] for line in out2.read_text().splitlines()[1:]]
    assert np.abs(np.array(a) - np.array(b)).max() <= 1e-6


def test_bert_family_requires_768(tmp_path, manifest_path):
    out = tmp_path / "fixture.jsonl"
    spec = ExportSpec("bert-base-uncased", str(manifest_path), str(out))
    with pytest.raises(ValueError, match="768"):
        run_export(spec, encoder=FakeEncoder(dim=384))
    header = run_export(spec, encoder=FakeEncoder(dim=768))
    assert header["dim"] == 768


def test_minilm_family_requires_384(tmp_path, manifest_path):
    out = tmp_path / "fixture.jsonl"
    spec = ExportSpec("paraphrase-MiniLM-L6-v2", str(manifest_path), str(out))
    with pytest.raises(ValueError, match="384"):
        run_export(spec, encoder=FakeEncoder(dim=768))


def test_spec_validation():
    with pytest.raises(ValueError, match="unknown model"):
        ExportSpec("gpt-7", "m.json", "out.jsonl")
    with pytest.raises(ValueError, match="pooling"):
        ExportSpec("paraphrase-MiniLM-L6-v2", "m.json", "o.jsonl", pooling="cls")
    ExportSpec("bert-base-uncased", "m.json", "o.jsonl", pooling="cls")


def test_bert_pooling_recorded_in_header(tmp_path, manifest_path):
    out = tmp_path / "fixture.jsonl"
    enc = FakeEncoder(dim=768, model_id="bert-base-uncased")
    enc.header_extra = {"pooling": "cls"}
    header = run_export(
        ExportSpec("bert-base-uncased", str(manifest_path), str(out), pooling="cls"),
        encoder=enc,
    )
    assert header["pooling"] == "cls"


def test_dataset_shaped_manifest_subsets(tmp_path):
    payload = {
        "items": [{"id": "age", "text": "Age", "gold": "personal"}],
        "labels": {"personal": "personal", "workplace": "workplace"},
    }
    path = tmp_path / "dataset.json"
    path.write_text(json.dumps(payload))
    assert load_texts(path, "items") == [("age", "Age")]
    assert load_texts(path, "labels") == [
        ("personal", "personal"), ("workplace", "workplace")
    ]
    assert len(load_texts(path, "all")) == 3


def test_manifest_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ManifestError):
        load_texts(bad)
    dup = tmp_path / "dup.json"
    dup.write_text(json.dumps({"records": [
        {"id": "a", "text": "x"}, {"id": "a", "text": "y"}
    ]}))
    with pytest.raises(ManifestError, match="duplicate"):
        load_texts(dup)


def test_empty_manifest_rejected(tmp_path, fake_encoder):
    path = tmp_path / "empty.json"
    path.write_text(json.dumps({"records": []}))
    spec = ExportSpec("paraphrase-MiniLM-L6-v2", str(path), str(tmp_path / "o.jsonl"))
    with pytest.raises(ManifestError, match="no texts"):
        run_export(spec, encoder=fake_encoder)


@pytest.mark.skipif(
    not os.environ.get("RUN_MODEL_EXPORT"),
    reason="set RUN_MODEL_EXPORT=1 to export from the real checkpoints "
    "(needs the model hub or a local cache)",
)
def test_real_minilm_checkpoint(tmp_path, manifest_path):
    out = tmp_path / "real.jsonl"
    spec = ExportSpec("paraphrase-MiniLM-L6-v2", str(manifest_path), str(out))
    header = run_export(spec)
    assert header["dim"] == 384

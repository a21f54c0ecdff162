import io
import json
import os
from contextlib import redirect_stderr, redirect_stdout

import pytest

from embed_export.cli import main


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        try:
            code = main(list(argv))
        except SystemExit as e:
            code = e.code
    return code, out.getvalue(), err.getvalue()


def test_usage_errors_exit_2(tmp_path):
    code, _, _ = run_cli("--model", "unknown-model", "--in", "x", "--out", "y")
    assert code == 2
    code, _, _ = run_cli("--model", "bert-base-uncased")
    assert code == 2


def test_empty_text_list_exits_2(tmp_path):
    manifest = tmp_path / "empty.json"
    manifest.write_text(json.dumps({"records": []}))
    code, _, err = run_cli(
        "--model", "bert-base-uncased",
        "--in", str(manifest), "--out", str(tmp_path / "o.jsonl"),
    )
    assert code == 2
    assert "no texts" in err


def test_missing_manifest_exits_1(tmp_path):
    code, _, err = run_cli(
        "--model", "bert-base-uncased",
        "--in", str(tmp_path / "nope.json"), "--out", str(tmp_path / "o.jsonl"),
    )
    assert code == 1
    assert "nope.json" in err


@pytest.mark.skipif(
    bool(os.environ.get("RUN_MODEL_EXPORT")),
    reason="checkpoints available; the offline failure path does not apply",
)
def test_unavailable_checkpoint_exits_1(tmp_path, monkeypatch):
    manifest = tmp_path / "m.json"
    manifest.write_text(json.dumps({"records": [{"id": "a", "text": "Age"}]}))
    # force offline so the checkpoint load fails fast instead of retrying
    monkeypatch.setenv("HF_HUB_OFFLINE", "1")
    monkeypatch.setenv("TRANSFORMERS_OFFLINE", "1")
    code, _, err = run_cli(
        "--model", "bert-base-uncased",
        "--in", str(manifest), "--out", str(tmp_path / "o.jsonl"),
    )
    assert code == 1
    assert "error" in err

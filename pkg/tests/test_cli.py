import csv
import io
import json
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

import pytest

from riskrank.cli import main

REPO = Path(__file__).resolve().parents[1]
DATASET = str(REPO / "data/msd_factors.json")
ST_ITEMS = str(REPO / "fixtures/st_items.jsonl")
ST_LABELS = str(REPO / "fixtures/st_labels.jsonl")
SURVEY = str(REPO / "data/survey_synthetic.csv")


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        try:
            code = main(list(argv))
        except SystemExit as e:  # argparse usage errors
            code = e.code
    return code, out.getvalue(), err.getvalue()


def test_validate_ok_dataset():
    code, out, _ = run_cli("validate", "--dataset", DATASET, "--format", "json")
    assert code == 0
    assert json.loads(out)["valid"] is True


def test_validate_broken_dataset_exits_1(tmp_path):
    bad = tmp_path / "bad.json"
    payload = json.loads(Path(DATASET).read_text())
    payload["items"][0]["gold"] = "ergonomic"
    bad.write_text(json.dumps(payload))
    code, out, _ = run_cli("validate", "--dataset", str(bad), "--format", "json")
    assert code == 1
    assert json.loads(out)["violations"][0]["code"] == "unknown-label"


def test_classify_table_and_json_agree():
    args = ("classify", "--fixture", ST_ITEMS, "--labels", ST_LABELS,
            "--metric", "euclidean")
    code, table_out, _ = run_cli(*args)
    assert code == 0
    code, json_out, _ = run_cli(*args, "--format", "json")
    assert code == 0
    payload = json.loads(json_out)
    assert len(payload["predictions"]) == 25
    # every predicted label appears in the table output
    for rec in payload["predictions"]:
        assert rec["item_id"] in table_out


def test_classify_csv_round_trips_from_json():
    args = ("classify", "--fixture", ST_ITEMS, "--labels", ST_LABELS,
            "--metric", "minkowski")
    _, json_out, _ = run_cli(*args, "--format", "json")
    _, csv_out, _ = run_cli(*args, "--format", "csv")
    payload = json.loads(json_out)
    rows = list(csv.DictReader(io.StringIO(csv_out)))
    assert len(rows) == len(payload["predictions"])
    for rec, row in zip(payload["predictions"], rows):
        assert row["item_id"] == rec["item_id"]
        assert row["predicted"] == rec["predicted"]


def test_classify_dim_mismatch_is_data_error():
    code, _, err = run_cli(
        "classify", "--fixture", ST_ITEMS,
        "--labels", str(REPO / "fixtures/bert_labels.jsonl"),
        "--metric", "euclidean",
    )
    assert code == 1
    assert "dim" in err


def test_usage_error_exits_2():
    code, _, _ = run_cli("classify", "--metric", "hamming")
    assert code == 2
    code, _, _ = run_cli("frobnicate")
    assert code == 2


def test_evaluate_minkowski_defaults_p3():
    args = ("evaluate", "--fixture", ST_ITEMS, "--labels", ST_LABELS,
            "--dataset", DATASET, "--metric", "minkowski", "--format", "json")
    code, out, _ = run_cli(*args)
    assert code == 0
    payload = json.loads(out)
    assert payload["accuracy"] == 1.0
    explicit = run_cli(*args[:-2], "--p", "3.0", "--format", "json")
    assert json.loads(explicit[1]) == payload


def test_evaluate_jaccard_from_dataset_texts():
    code, out, _ = run_cli(
        "evaluate", "--dataset", DATASET, "--metric", "jaccard", "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["accuracy"] == pytest.approx(0.2)
    assert payload["per_class"]["personal"]["recall"] == 1.0


def test_crossval_then_compare(tmp_path):
    a_path, b_path = tmp_path / "a.json", tmp_path / "b.json"
    for metric, path in (("euclidean", a_path), ("jaccard", b_path)):
        args = ["crossval", "--dataset", DATASET, "--metric", metric,
                "--k", "10", "--seed", "77", "--format", "json"]
        if metric == "euclidean":
            args += ["--fixture", ST_ITEMS, "--labels", ST_LABELS]
        code, out, _ = run_cli(*args)
        assert code == 0
        path.write_text(out)
    payload = json.loads(a_path.read_text())
    assert len(payload["fold_accuracies"]) == 10
    assert payload["plan"]["seed"] == 77

    code, out, _ = run_cli("compare", "--a", str(a_path), "--b", str(b_path),
                           "--format", "json")
    assert code == 0
    result = json.loads(out)
    assert result["df"] == 9
    assert result["t_stat"] > 0  # euclidean beats the collapsed token model
    assert result["decision"] in (
        "reject_h0_practical", "reject_h0_only", "practical_only", "no_difference"
    )


def test_rank_csv_has_table_shape():
    code, out, _ = run_cli("rank", "--survey", SURVEY, "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 25
    assert list(rows[0].keys()) == ["factor", "rank"]
    by_factor = {r["factor"]: int(r["rank"]) for r in rows}
    assert by_factor["Working posture"] == 1
    assert by_factor["Job insecurity"] == 25
    # default order is alphabetical by factor
    assert [r["factor"] for r in rows] == sorted(r["factor"] for r in rows)


def test_rank_order_rank_flag():
    code, out, _ = run_cli("rank", "--survey", SURVEY, "--format", "csv",
                           "--order", "rank")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [int(r["rank"]) for r in rows] == list(range(1, 26))
    assert rows[0]["factor"] == "Working posture"


def test_describe_matches_reference_stats():
    code, out, _ = run_cli("describe", "--survey", SURVEY, "--format", "csv")
    assert code == 0
    rows = {r["factor"]: r for r in csv.DictReader(io.StringIO(out))}
    age = rows["Age"]
    assert (age["mean"], age["std"]) == ("13.35", "6.81")
    assert (age["min"], age["q25"], age["q50"], age["q75"], age["max"]) == (
        "1", "6", "15", "19", "25"
    )


def test_missing_survey_file_is_data_error():
    code, _, err = run_cli("rank", "--survey", "no-such.csv")
    assert code == 1
    assert "no-such.csv" in err


def test_run_all_env_var_config(tmp_path, monkeypatch):
    out_dir = tmp_path / "bundle"
    config = (REPO / "configs/experiment.toml").read_text()
    config = config.replace('dir = "out/full-run"', f'dir = "{out_dir}"')
    cfg_path = tmp_path / "exp.toml"
    cfg_path.write_text(config)
    monkeypatch.setenv("RISKRANK_CONFIG", str(cfg_path))
    monkeypatch.chdir(REPO)
    code, out, _ = run_cli("run-all", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert len(payload["models"]) == 8
    assert (out_dir / "manifest.json").exists()


def test_run_all_without_config_is_error(monkeypatch):
    monkeypatch.delenv("RISKRANK_CONFIG", raising=False)
    code, _, err = run_cli("run-all")
    assert code == 1
    assert "config" in err.lower()

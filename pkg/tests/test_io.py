import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import numpy as np
import pytest

from riskrank.core import EmbeddingSet
from riskrank.errors import ParamError, ParseError, RangeError, RemoteError, SchemaError
from riskrank.io import (
    RemoteEmbedderConfig,
    cv_result_from_dict,
    cv_result_to_dict,
    fetch_embeddings,
    load_dataset,
    load_fixture,
    load_survey,
    write_fixture,
    write_survey,
)
from riskrank.ranking import SurveyMatrix


def test_fixture_round_trip_is_bit_exact(tmp_path):
    rng = np.random.default_rng(71)
    emb = EmbeddingSet(
        ["a", "b"], ["Alpha", "Beta"], rng.normal(size=(2, 7)), "model-x"
    )
    path = tmp_path / "f.jsonl"
    write_fixture(path, emb)
    back = load_fixture(path)
    assert back.ids == emb.ids and back.texts == emb.texts
    assert back.model_id == "model-x"
    assert np.array_equal(back.matrix, emb.matrix)


def test_committed_st_fixture_shape(st_items):
    assert len(st_items) == 25
    assert st_items.dim == 384
    assert st_items.normalized


def test_committed_bert_fixture_shape(bert_items, bert_labels):
    assert len(bert_items) == 25 and bert_items.dim == 768
    assert len(bert_labels) == 5 and not bert_labels.normalized


def test_fixture_wrong_vector_length(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text(
        json.dumps({"model_id": "m", "dim": 3, "normalized": False, "created": "t"})
        + "\n"
        + json.dumps({"id": "a", "text": "A", "vector": [1.0, 2.0]})
        + "\n"
    )
    with pytest.raises(SchemaError, match=":2"):
        load_fixture(path)


def test_fixture_bad_json_names_line(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text(
        json.dumps({"model_id": "m", "dim": 2, "normalized": False, "created": "t"})
        + "\n{not json\n"
    )
    with pytest.raises(ParseError, match=":2"):
        load_fixture(path)


def test_fixture_duplicate_id(tmp_path):
    header = json.dumps({"model_id": "m", "dim": 1, "normalized": False, "created": "t"})
    rec = json.dumps({"id": "a", "text": "A", "vector": [1.0]})
    path = tmp_path / "dup.jsonl"
    path.write_text(f"{header}\n{rec}\n{rec}\n")
    with pytest.raises(SchemaError, match="duplicate"):
        load_fixture(path)


def test_fixture_empty_records_warns(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text(
        json.dumps({"model_id": "m", "dim": 4, "normalized": True, "created": "t"}) + "\n"
    )
    with pytest.warns(UserWarning, match="no records"):
        emb = load_fixture(path)
    assert len(emb) == 0 and emb.dim == 4


def test_fixture_wrong_normalized_flag_corrected_with_warning(tmp_path):
    emb = EmbeddingSet(["a"], ["A"], [[3.0, 4.0]], "m")
    path = tmp_path / "flag.jsonl"
    write_fixture(path, emb)
    raw = path.read_text().splitlines()
    header = json.loads(raw[0])
    header["normalized"] = True
    path.write_text("\n".join([json.dumps(header), *raw[1:]]) + "\n")
    with pytest.warns(UserWarning, match="normalized"):
        back = load_fixture(path)
    assert back.normalized is False


def test_dataset_manifest_round_trip(tmp_path, dataset):
    from riskrank.io import write_dataset

    path = tmp_path / "d.json"
    write_dataset(path, dataset)
    back = load_dataset(path)
    assert back.items == dataset.items
    assert back.labels.texts == dataset.labels.texts


def _write_csv(path, header, rows):
    lines = [",".join(header)] + [",".join(str(c) for c in r) for r in rows]
    path.write_text("\n".join(lines) + "\n")


def test_load_survey_strict_range(tmp_path):
    path = tmp_path / "s.csv"
    _write_csv(path, ["a", "b"], [[1, 2], [26, 3]])
    with pytest.raises(RangeError, match=":3"):
        load_survey(path, expected_factors=["a", "b"])


def test_load_survey_rejects_non_integer(tmp_path):
    path = tmp_path / "s.csv"
    _write_csv(path, ["a", "b"], [[1, 2], [3.5, 3]])
    with pytest.raises(ParseError, match="3.5"):
        load_survey(path, expected_factors=["a", "b"])


def test_load_survey_header_matching_case_insensitive(tmp_path):
    path = tmp_path / "s.csv"
    _write_csv(path, ["  AGE ", "Gender"], [[1, 2]])
    survey = load_survey(path, expected_factors=["Age", "Gender"])
    assert survey.factors == ("Age", "Gender")


def test_load_survey_unknown_header(tmp_path):
    path = tmp_path / "s.csv"
    _write_csv(path, ["Age", "Shoe size"], [[1, 2]])
    with pytest.raises(SchemaError, match="Shoe size"):
        load_survey(path, expected_factors=["Age", "Gender"])


def test_load_survey_alias_map(tmp_path):
    path = tmp_path / "s.csv"
    _write_csv(path, ["Age", "Life Style"], [[1, 2]])
    survey = load_survey(
        path, expected_factors=["Age", "Lifestyle"], aliases={"life style": "Lifestyle"}
    )
    assert survey.factors == ("Age", "Lifestyle")


def test_load_survey_accepts_inside_rejects_outside_randomized(tmp_path):
    rng = np.random.default_rng(73)
    factors = [f"f{i}" for i in range(6)]
    for trial in range(25):
        rows = rng.integers(1, 26, size=(8, 6))
        bad = bool(rng.integers(0, 2))
        if bad:
            r, c = rng.integers(0, 8), rng.integers(0, 6)
            rows[r, c] = rng.choice([0, -3, 26, 40])
        path = tmp_path / f"s{trial}.csv"
        _write_csv(path, factors, rows.tolist())
        if bad:
            with pytest.raises(RangeError):
                load_survey(path, expected_factors=factors)
        else:
            survey = load_survey(path, expected_factors=factors)
            assert np.array_equal(survey.responses, rows)


def test_write_survey_round_trip(tmp_path):
    rng = np.random.default_rng(79)
    survey = SurveyMatrix(("x", "y"), rng.integers(1, 26, size=(10, 2)))
    path = tmp_path / "rt.csv"
    write_survey(path, survey)
    back = load_survey(path, expected_factors=["x", "y"])
    assert np.array_equal(back.responses, survey.responses)


def test_cv_result_dict_round_trip():
    from riskrank.crossval import CvResult

    res = CvResult("m", (1.0, 0.5), 0.75, 0.3535, 2, 9)
    back = cv_result_from_dict(cv_result_to_dict(res))
    assert back == res
    with pytest.raises(SchemaError):
        cv_result_from_dict({"model_name": "m"})


class _EmbedHandler(BaseHTTPRequestHandler):
    dim = 4
    fail_with = None
    short = False
    requests_seen = []

    def do_POST(self):
        body = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
        type(self).requests_seen.append(len(body["texts"]))
        if self.fail_with:
            self.send_response(self.fail_with)
            self.end_headers()
            return
        n = len(body["texts"]) - (1 if self.short else 0)
        payload = {
            "model": "remote-model",
            "dim": self.dim,
            "vectors": [[float(i + j) for j in range(self.dim)] for i in range(n)],
        }
        data = json.dumps(payload).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, *args):
        pass


@pytest.fixture()
def embed_server():
    _EmbedHandler.fail_with = None
    _EmbedHandler.short = False
    _EmbedHandler.requests_seen = []
    server = HTTPServer(("127.0.0.1", 0), _EmbedHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_port}"
    server.shutdown()


def test_fetch_embeddings_batching_preserves_order(embed_server):
    texts = [f"text {i}" for i in range(25)]
    cfg = RemoteEmbedderConfig(embed_server, timeout_ms=5000, batch_size=10)
    emb = fetch_embeddings(texts, cfg)
    assert _EmbedHandler.requests_seen == [10, 10, 5]
    assert len(emb) == 25 and emb.dim == 4
    assert emb.texts == tuple(texts)
    assert emb.model_id == "remote-model"


def test_fetch_embeddings_count_mismatch(embed_server):
    _EmbedHandler.short = True
    cfg = RemoteEmbedderConfig(embed_server, timeout_ms=5000, batch_size=25)
    with pytest.raises(SchemaError, match="24 vectors for 25"):
        fetch_embeddings([f"t{i}" for i in range(25)], cfg)


def test_fetch_embeddings_http_error(embed_server):
    _EmbedHandler.fail_with = 503
    cfg = RemoteEmbedderConfig(embed_server, timeout_ms=5000, batch_size=4)
    with pytest.raises(RemoteError, match="503"):
        fetch_embeddings(["a"], cfg)


def test_fetch_embeddings_timeout():
    # unroutable TEST-NET address: connect blocks until the timeout fires
    cfg = RemoteEmbedderConfig("http://192.0.2.1", timeout_ms=300, batch_size=4)
    with pytest.raises((TimeoutError, RemoteError)):
        fetch_embeddings(["a"], cfg)


def test_remote_config_validation():
    with pytest.raises(ParamError):
        RemoteEmbedderConfig("http://x", timeout_ms=0)
    with pytest.raises(ParamError):
        RemoteEmbedderConfig("http://x", batch_size=0)

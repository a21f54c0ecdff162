import os
from pathlib import Path

import pytest

from riskrank.corpus import canonical_dataset
from riskrank.io import load_fixture

REPO = Path(__file__).resolve().parents[1]
FIXTURES = REPO / "fixtures"
DATA = REPO / "data"

# The real survey download is not bundled; point this env var at the CSV to
# run the published-table assertions against the original data.
REAL_SURVEY_ENV = "MSD_SURVEY_CSV"


@pytest.fixture(scope="session")
def dataset():
    return canonical_dataset()


@pytest.fixture(scope="session")
def st_items():
    return load_fixture(FIXTURES / "st_items.jsonl")


@pytest.fixture(scope="session")
def st_labels():
    return load_fixture(FIXTURES / "st_labels.jsonl")


@pytest.fixture(scope="session")
def st_labels_cosine():
    return load_fixture(FIXTURES / "st_labels_cosine.jsonl")


@pytest.fixture(scope="session")
def bert_items():
    return load_fixture(FIXTURES / "bert_items.jsonl")


@pytest.fixture(scope="session")
def bert_labels():
    return load_fixture(FIXTURES / "bert_labels.jsonl")


@pytest.fixture(scope="session")
def synthetic_survey_path():
    return DATA / "survey_synthetic.csv"


@pytest.fixture(scope="session")
def real_survey_path():
    path = os.environ.get(REAL_SURVEY_ENV)
    if path and Path(path).exists():
        return Path(path)
    default = DATA / "msd_survey_real.csv"
    return default if default.exists() else None

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gromacs import gromacs_dataset  # noqa: E402

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def gromacs_doc():
    return gromacs_dataset()


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return DATA_DIR / "corpus"


@pytest.fixture(scope="session")
def rules_path() -> Path:
    return DATA_DIR / "rules.conf"


@pytest.fixture(scope="session")
def steps_rules_path() -> Path:
    return DATA_DIR / "steps.conf"


@pytest.fixture(scope="session")
def golden_xml_path() -> Path:
    return DATA_DIR / "golden.xml"

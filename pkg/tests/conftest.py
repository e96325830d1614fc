import json
from pathlib import Path

import pytest

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def extraction_reference() -> dict:
    with open(DATA_DIR / "extraction_reference.json", encoding="utf-8") as fh:
        return json.load(fh)

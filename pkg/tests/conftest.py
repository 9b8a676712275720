import sys
from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def toy_paths() -> dict[str, str]:
    return {
        "input": str(DATA / "toy_input.csv"),
        "reference": str(DATA / "toy_reference.csv"),
    }

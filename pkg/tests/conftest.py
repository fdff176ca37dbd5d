import json
from pathlib import Path

import pytest

from mamcodec.fixtures import fixture_weights

GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def weights():
    return fixture_weights()


@pytest.fixture(scope="session")
def golden_manifest():
    return json.loads((GOLDEN_DIR / "manifest.json").read_text())


def golden_bytes(name, kind):
    return (GOLDEN_DIR / f"{name}.{kind}").read_bytes()

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sketchocr.fixtures import load_fixture  # noqa: E402
from sketchocr.raster import BinaryImage  # noqa: E402

ACCEPTANCE_RESULTS = []


@pytest.fixture(scope="session")
def block_set():
    return load_fixture("block")


@pytest.fixture(scope="session")
def serif_set():
    return load_fixture("serif")


@pytest.fixture(scope="session")
def fixture_sets(block_set, serif_set):
    return {"block": block_set, "serif": serif_set}


def random_image(rng, width=32, height=32, density=0.5):
    return BinaryImage(rng.random((height, width)) < density)


@pytest.fixture
def acceptance_record():
    def record(number, title, passed, detail=""):
        ACCEPTANCE_RESULTS.append((number, title, passed, detail))
        assert passed, f"criterion {number} ({title}) failed: {detail}"
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(ACCEPTANCE_RESULTS):
        mark = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{mark}] {number}. {title}" + (f" -- {detail}" if detail else ""))

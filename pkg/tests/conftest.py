import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pg3quad.gf import field_of_order  # noqa: E402

SUPPORTED_Q = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]
GEOMETRY_Q = [2, 3, 4, 5, 7, 8, 9]

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def gf():
    return field_of_order


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

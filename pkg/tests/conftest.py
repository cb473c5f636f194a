import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from trihc.constructions import double_wheel, fixtures, icosahedron, k4, octahedron  # noqa: E402

_ACCEPTANCE: list[str] = []


@pytest.fixture(scope="session")
def named():
    return fixtures()


@pytest.fixture
def K4():
    return k4()


@pytest.fixture
def B3():
    return double_wheel(3)


@pytest.fixture
def octa():
    return octahedron()


@pytest.fixture
def icosa():
    return icosahedron()


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)

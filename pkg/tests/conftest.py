import numpy as np
import pytest

from modframe import GridSpec
from modframe.probes import random_bandlimited

_ACCEPTANCE = []


def record(line: str) -> None:
    _ACCEPTANCE.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def grid():
    # default acceptance grid: 64 time units, 1024 samples per unit
    return GridSpec.centered(64, 1024)


@pytest.fixture(scope="session")
def small():
    # 8 time units, 64 samples per unit; enough for most unit tests
    return GridSpec.centered(8, 64)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def bl(small, rng):
    def make(band=4.0):
        return random_bandlimited(small, rng, band)
    return make

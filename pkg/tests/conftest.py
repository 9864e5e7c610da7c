import os

import pytest

from wallspace.complex_core import load_spec

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
FIXTURES = os.path.join(ROOT, "fixtures")


def fixture_path(name):
    return os.path.join(FIXTURES, name)


@pytest.fixture(scope="session")
def vspec():
    return load_spec(fixture_path("v_bowtie.complex"))


@pytest.fixture(scope="session")
def tspec():
    return load_spec(fixture_path("flat_torus.complex"))


@pytest.fixture(scope="session")
def vsys(vspec):
    from wallspace.walls import wall_system
    return wall_system(vspec, 3)


@pytest.fixture(scope="session")
def tsys(tspec):
    from wallspace.walls import wall_system
    return wall_system(tspec, 3)


ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])

import pytest

from wilsonrep.corpus import make_entry
from wilsonrep.window import build_wilson_window

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def psi():
    return build_wilson_window()


@pytest.fixture(scope="session")
def bump_entry():
    return make_entry("bump")


@pytest.fixture(scope="session")
def gaussian_entry():
    return make_entry("gaussian")


@pytest.fixture(scope="session")
def bump_coeffs(psi, bump_entry):
    return bump_entry.coefficients(psi)


@pytest.fixture(scope="session")
def record():
    def _record(line):
        ACCEPTANCE_LINES.append(line)
        print(line)

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import numpy as np
import pytest

from madpde.geometry import GridSpec, build_domain

_ACCEPTANCE_RESULTS = []


def record_acceptance(criterion, ok, detail):
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} — {detail}"
    print(f"[ACCEPTANCE] {line}")
    _ACCEPTANCE_RESULTS.append((criterion, line))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE_RESULTS):
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def square51():
    return build_domain("square", GridSpec(51))


@pytest.fixture(scope="session")
def square21():
    return build_domain("square", GridSpec(21))


@pytest.fixture(scope="session")
def disk51():
    return build_domain("disk", GridSpec(51))


@pytest.fixture(scope="session")
def lshape51():
    return build_domain("lshape", GridSpec(51))


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)

import pytest

from ssmdecay.measure import HomogeneousSSM

_ACCEPTANCE = []


@pytest.fixture
def cantor():
    return HomogeneousSSM(1 / 3, (0, 1), (0.5, 0.5))


@pytest.fixture
def uniform():
    return HomogeneousSSM(0.5, (0, 1), (0.5, 0.5))


@pytest.fixture
def criterion():
    """Record one line per acceptance criterion for the terminal summary."""

    def record(name, ok, detail=""):
        _ACCEPTANCE.append((name, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")

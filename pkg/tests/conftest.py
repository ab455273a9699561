import pytest

from helpers import resonant_experiment


@pytest.fixture(scope="session")
def resonant():
    """Resonant scenario at hbar = 0.15 (third cap level, k = 0 probing level)."""
    return resonant_experiment(0.15)


# filled by tests/test_acceptance.py, echoed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1][2:])):
            terminalreporter.write_line(line)

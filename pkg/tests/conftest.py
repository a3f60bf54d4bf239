import numpy as np
import pytest

from gcdephasing.states import random_density

ACCEPTANCE_LINES = []


def record(criterion, ok, detail=""):
    """Remember one acceptance outcome for the terminal summary."""
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def random_states():
    rng = np.random.default_rng(7)
    return [random_density(rng) for _ in range(100)]

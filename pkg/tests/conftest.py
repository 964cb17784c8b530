import numpy as np
import pytest
from hypothesis import settings

from symbreak.ai_dynamics import AiScenario

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def impulse_scenario():
    """Strongly impulsive ramp: t0 = t_hat / 100, delta = 1 so t_hat = 1."""
    return AiScenario.from_reduced(100.0, 1.0, 1e-2)


@pytest.fixture
def adiabatic_scenario():
    return AiScenario.from_reduced(100.0, 1.0, 10.0)


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""

    def record(label: str, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

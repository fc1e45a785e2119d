import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rarewave.gaslaw import PressureLaw  # noqa: E402
from rarewave.riemann import RiemannData, solve_fan  # noqa: E402
from rarewave.approx_wave import ApproxWave  # noqa: E402


@pytest.fixture
def law():
    return PressureLaw(1.0, 2.0)


@pytest.fixture
def sym_fan(law):
    return solve_fan(law, RiemannData(1.0, 0.0, 1.0, 1.0))


@pytest.fixture
def sym_wave(law, sym_fan):
    return ApproxWave(law, sym_fan, eps=0.1, q=2.0)


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line for the end-of-run acceptance summary."""

    def emit(number: int, passed: bool, detail: str):
        line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return emit


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

import sys
from pathlib import Path

import pytest

from colorvoronoi.geometry import ColoredSiteSet

sys.path.insert(0, str(Path(__file__).parent))

# One line per acceptance criterion, printed at the end of the run.
_criterion_lines: list[str] = []


def record_criterion(number: int, passed: bool, detail: str) -> None:
    line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
    _criterion_lines.append(line)
    print(line)


@pytest.fixture
def criterion():
    return record_criterion


def pytest_terminal_summary(terminalreporter):
    if _criterion_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_criterion_lines):
            terminalreporter.write_line(line)


TRIANGLE = ([(0, 0), (4, 0), (0, 3)], [0, 1, 2])
QUAD = ([(0, 0), (10, 0), (11, 9), (1, 10)], [0, 1, 2, 3])
MIXED = ([(0, 0), (7, 1), (3, 6), (9, 8), (2, -5)], [0, 0, 1, 2, 2])


@pytest.fixture
def t3():
    return ColoredSiteSet.from_points(*TRIANGLE)


@pytest.fixture
def p4():
    return ColoredSiteSet.from_points(*QUAD)


@pytest.fixture
def m5():
    return ColoredSiteSet.from_points(*MIXED)

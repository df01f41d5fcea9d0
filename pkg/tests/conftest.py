from pathlib import Path

import pytest

from featuremu.logic import MULPF, parse_formula
from featuremu.models import parse_fts

ROOT = Path(__file__).resolve().parent.parent
MODELS = ROOT / "models"
SD_OFTEN = "nu X. mu Y. (([ins|E]Y && [cd|E]Y && [lg|E]Y) && [sd|E]X)"

# lines printed by the acceptance tests, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def coffee():
    return parse_fts((MODELS / "coffee.fts").read_text())


@pytest.fixture(scope="session")
def example3():
    return parse_fts((MODELS / "example3.fts").read_text())


@pytest.fixture(scope="session")
def sd_often():
    return parse_formula(SD_OFTEN, MULPF)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

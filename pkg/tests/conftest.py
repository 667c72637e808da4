import os
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "data"
SEMEION_PATH = Path(os.environ.get("QPERCEPTRON_SEMEION", DATA / "semeion.data"))

_criteria: dict[str, str] = {}


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def optdigits_tes():
    return DATA / "optdigits.tes"


@pytest.fixture
def optdigits_tra():
    return DATA / "optdigits.tra"


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the summary")


def pytest_runtest_logreport(report):
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        for mark in report.user_properties:
            if mark[0] == "criterion":
                _criteria[mark[1]] = report.outcome.upper()


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_setup(item):
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        item.user_properties.append(("criterion", mark.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_criteria, key=lambda s: int(s.split()[0].rstrip("."))):
        terminalreporter.write_line(f"{_criteria[label]:7s} {label}")

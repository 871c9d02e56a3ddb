from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bitrades.formats import read_document  # noqa: E402

DATA = Path(__file__).resolve().parents[1] / "src" / "bitrades" / "data"

_criteria: dict[int, tuple[str, str]] = {}


def load(name: str):
    return read_document(DATA / name).payload


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def example1():
    return load("example1.bitrade")


@pytest.fixture(scope="session")
def example2():
    return load("example2.bitrade")


@pytest.fixture(scope="session")
def c3c3():
    return load("groupc3c3.bitrade")


@pytest.fixture(scope="session")
def remark5():
    return load("remark5.bitrade")


@pytest.fixture(scope="session")
def inter():
    return load("intercalate.bitrade")


@pytest.fixture(scope="session")
def two_inter():
    return load("two_intercalates.bitrade")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or (report.when != "call" and not report.failed):
        return
    n, title = marker.args
    # a criterion fails if any of its tests fails, in setup or in the call
    failed = report.failed or _criteria.get(n, (title, "pass"))[1] == "fail"
    _criteria[n] = (title, "fail" if failed else "pass")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        title, status = _criteria[n]
        terminalreporter.write_line(f"criterion {n:2d}: {status.upper():4s}  {title}")

from pathlib import Path

import pytest

from ksubcover.instances import InstanceFile, read_instance

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"

_criteria: list[tuple[str, bool, str]] = []


@pytest.fixture
def record_criterion():
    """Record a one-line pass/fail verdict for the terminal summary."""

    def record(name: str, passed: bool, detail: str = "") -> None:
        _criteria.append((name, passed, detail))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _criteria:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}")


@pytest.fixture
def i0() -> InstanceFile:
    """Two elements, k=2, w=(1,2), unit universe {0,1,2}; a->({0,1},{0}), b->({2},{1,2})."""
    return read_instance(DATA / "i0.ksc")

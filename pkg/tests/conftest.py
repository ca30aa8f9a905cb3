import numpy as np
import pytest

ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


@pytest.fixture
def record_criterion():
    """Record one acceptance line: ``record_criterion(number, title, ok, detail)``."""

    def _record(number, title, ok, detail=""):
        ACCEPTANCE[number] = (title, bool(ok), detail)

    return _record


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[number]
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] {number:2d}. {title}" + (f" ({detail})" if detail else ""))

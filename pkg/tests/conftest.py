import pytest

ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion."""

    def record(criterion: str, passed: bool, detail: str = "") -> bool:
        ACCEPTANCE.append((criterion, bool(passed), detail))
        return bool(passed)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, passed, detail in ACCEPTANCE:
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {criterion}: {detail}")

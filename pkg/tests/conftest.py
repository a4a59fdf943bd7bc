import pytest

_CRITERION_LINES = []


@pytest.fixture
def criterion_record():
    """Recorder for acceptance criteria; lines echo in the terminal summary."""

    def record(number: int, ok: bool, detail: str) -> None:
        status = "PASS" if ok else "FAIL"
        _CRITERION_LINES.append(f"criterion {number}: {status} — {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERION_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(_CRITERION_LINES):
        terminalreporter.write_line(line)

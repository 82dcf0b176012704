import pytest

_VERDICTS = {}


@pytest.fixture
def criterion():
    """Record a verdict line for one acceptance criterion, then assert it."""

    def record(number, ok, detail):
        _VERDICTS[number] = (bool(ok), detail)
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}"
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_VERDICTS):
        ok, detail = _VERDICTS[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")

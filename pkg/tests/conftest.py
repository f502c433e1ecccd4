import pytest

_VERDICTS = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion.

    The line is printed immediately (visible with ``-s``) and repeated in the
    terminal summary.
    """

    def record(number, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
        _VERDICTS.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)

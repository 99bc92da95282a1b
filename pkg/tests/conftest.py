"""Collects acceptance results and prints one line per criterion."""
import pytest

_RESULTS = []


class _Recorder:
    def __call__(self, criterion, passed, detail):
        _RESULTS.append((criterion, bool(passed), detail))
        return passed


@pytest.fixture
def record():
    return _Recorder()


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, passed, detail in sorted(_RESULTS, key=lambda r: (int(str(r[0]).split()[0]), str(r[0]))):
        terminalreporter.write_line(f"criterion {criterion}: {'PASS' if passed else 'FAIL'}  {detail}")

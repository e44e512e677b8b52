import pytest

_CRITERIA: list[tuple[str, bool, str]] = []


@pytest.fixture(scope="session")
def report_criterion():
    def record(name: str, passed: bool, detail: str):
        _CRITERIA.append((name, passed, detail))
        print(f"{'PASS' if passed else 'FAIL'} criterion {name}: {detail}")
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _CRITERIA:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} criterion {name}: {detail}")

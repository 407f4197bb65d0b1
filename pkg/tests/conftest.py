import pytest

_OUTCOMES = {}


@pytest.fixture
def record_outcome():
    def record(outcome):
        _OUTCOMES[outcome.number] = outcome
        return outcome
    return record


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_OUTCOMES):
        terminalreporter.write_line(_OUTCOMES[n].line())
    passed = sum(o.passed for o in _OUTCOMES.values())
    terminalreporter.write_line(f"{passed}/{len(_OUTCOMES)} criteria passed")

import pytest

_OUTCOMES = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    name = mark.args[0]
    if report.when == "call" or report.failed:
        ok = report.passed or (report.when != "call" and not report.failed)
        _OUTCOMES[name] = _OUTCOMES.get(name, True) and ok


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok in _OUTCOMES.items():
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {name}")

from pathlib import Path

import pytest

_RESULTS = {}


@pytest.fixture
def data_dir():
    return Path(__file__).parent / "data"


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(ident, title): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when == "teardown":
        return
    ident, title = marker.args
    ok = report.passed or (report.when == "setup" and not report.failed and not report.skipped)
    prev = _RESULTS.get(item.nodeid)
    if report.when == "call" or prev is None or not ok:
        _RESULTS[item.nodeid] = (str(ident), title, ok and (prev is None or prev[2]), report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for ident, title, ok, duration in sorted(_RESULTS.values(), key=lambda r: _sort_key(r[0])):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"C{ident:<3} {status}  {title} ({duration:.2f}s)")


def _sort_key(ident):
    digits = "".join(ch for ch in ident if ch.isdigit())
    return (int(digits or 0), ident)

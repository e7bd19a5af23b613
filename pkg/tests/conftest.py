"""Collects acceptance verdicts and prints one line per criterion after the run."""
import pytest

VERDICTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(key, title): acceptance criterion this test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or (report.when != "call" and report.passed):
        return
    key, title = marker.args
    entry = VERDICTS.setdefault(key, {"title": title, "checks": {}})
    ok = report.passed
    prev = entry["checks"].get(item.name, True)
    entry["checks"][item.name] = prev and ok


def pytest_terminal_summary(terminalreporter):
    if not VERDICTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for key in sorted(VERDICTS, key=lambda k: int(k)):
        entry = VERDICTS[key]
        failed = [name for name, ok in entry["checks"].items() if not ok]
        status = "PASS" if not failed else "FAIL"
        tr.write_line(f"[{status}] criterion {key}: {entry['title']} "
                      f"({len(entry['checks']) - len(failed)}/{len(entry['checks'])} checks)")
        for name in failed:
            tr.write_line(f"         failed: {name}")

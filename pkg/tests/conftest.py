import os

import pytest

_criteria: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_collection_modifyitems(config, items):
    if os.environ.get("QROOKS_LONGRUN") == "1":
        return
    skip = pytest.mark.skip(reason="long tier; set QROOKS_LONGRUN=1")
    for item in items:
        if "longrun" in item.keywords:
            item.add_marker(skip)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    label = f"{number}{mark.kwargs.get('part', '')}"
    if rep.when == "call" or (rep.when == "setup" and rep.skipped):
        status = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
        _criteria[label] = (title, status)
    elif rep.when == "setup" and rep.failed:
        _criteria[label] = (title, "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")

    def key(label):
        digits = "".join(ch for ch in label if ch.isdigit())
        return (int(digits), label)

    for label in sorted(_criteria, key=key):
        title, status = _criteria[label]
        terminalreporter.write_line(f"[{status}] criterion {label}: {title}")

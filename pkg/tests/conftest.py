from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

import pytest

_CRITERIA: dict[int, tuple[str, str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): an acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when != "call":
        return
    number, title = mark.args
    detail = ""
    if report.failed and hasattr(report.longrepr, "reprcrash"):
        detail = report.longrepr.reprcrash.message.splitlines()[0][:160]
    _CRITERIA[number] = ("PASS" if report.passed else "FAIL", title, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        status, title, detail = _CRITERIA[number]
        line = f"{status} criterion {number:2d}: {title}"
        terminalreporter.write_line(line + (f"  [{detail}]" if detail else ""))
    passed = sum(1 for s, _, _ in _CRITERIA.values() if s == "PASS")
    terminalreporter.write_line(f"{passed}/{len(_CRITERIA)} acceptance criteria pass")

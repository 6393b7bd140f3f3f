import re

_CRITERIA: dict[int, tuple[str, str]] = {}
_NAME = re.compile(r"test_criterion_(\d+)_(\w+)")


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    m = _NAME.search(report.nodeid)
    if not m:
        return
    num, label = int(m.group(1)), m.group(2).replace("_", " ")
    failed = report.failed
    if report.when == "call" or failed:
        prev = _CRITERIA.get(num, (label, "PASS"))[1]
        _CRITERIA[num] = (label, "FAIL" if failed or prev == "FAIL" else "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        label, status = _CRITERIA[num]
        terminalreporter.write_line(f"{status} criterion {num}: {label}")

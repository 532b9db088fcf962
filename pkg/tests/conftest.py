import re
from collections import defaultdict

_outcomes: dict[int, list[bool]] = defaultdict(list)
_NAME = re.compile(r"test_criterion_(\d+)")


def pytest_runtest_logreport(report):
    m = _NAME.search(report.nodeid)
    if not m:
        return
    crit = int(m.group(1))
    if report.when == "call":
        _outcomes[crit].append(report.passed and not hasattr(report, "wasxfail"))
    elif report.outcome != "passed":
        # setup errors, skips and xfails
        _outcomes[crit].append(False)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_outcomes):
        verdict = "PASS" if all(_outcomes[crit]) else "FAIL"
        terminalreporter.write_line(f"criterion {crit}: {verdict}")

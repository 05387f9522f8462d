import re

CRITERIA = {
    1: "end-to-end 4-coloring",
    2: "end-to-end 6-coloring",
    3: "logarithmic round scaling",
    4: "shrinkage per iteration",
    5: "extension property suite",
    6: "super-graph degree bounds",
    7: "charge procedure",
    8: "lower-bound forcing",
    9: "indistinguishability experiment",
    10: "locality contract",
}

_PATTERN = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_")
_outcomes: dict[int, list[bool]] = {}


def pytest_runtest_logreport(report):
    m = _PATTERN.search(report.nodeid)
    if not m:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _outcomes.setdefault(int(m.group(1)), []).append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for num, title in CRITERIA.items():
        results = _outcomes.get(num)
        if results is None:
            status = "NOT RUN"
        else:
            status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d} ({title}): {status}")

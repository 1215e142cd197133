import re
from collections import defaultdict

_CRITERION = re.compile(r"test_acceptance\.py::test_c(\d+)_(\w+)")
_results: dict[int, list[tuple[str, bool]]] = defaultdict(list)


def pytest_runtest_logreport(report):
    match = _CRITERION.search(report.nodeid)
    if not match:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        name = match.group(2) + (report.nodeid[report.nodeid.index("["):] if "[" in report.nodeid else "")
        _results[int(match.group(1))].append((name, report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        parts = _results[number]
        failed = [name for name, ok in parts if not ok]
        status = "PASS" if not failed else "FAIL"
        line = f"criterion {number:2d}: {status} ({len(parts) - len(failed)}/{len(parts)} sub-parts)"
        if failed:
            line += " failing: " + ", ".join(failed)
        terminalreporter.write_line(line)

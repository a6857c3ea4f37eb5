import re

_CRITERION = re.compile(r"test_acceptance\.py::test_ac(\d+)_(\w+)")
# one line per criterion in the terminal summary, failed if any phase failed
_results: dict[int, tuple[str, bool]] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    num, name = int(m.group(1)), m.group(2)
    ok = _results.get(num, (name, True))[1]
    if report.failed or (report.when == "call" and not report.passed):
        ok = False
    _results[num] = (name, ok)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for num in sorted(_results):
        name, ok = _results[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {name}")

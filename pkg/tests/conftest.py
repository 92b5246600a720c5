import re

CRITERIA = {
    "c1": "feasibility oracle: fitness-weighted sampling vs exact proportions",
    "c2": "linkage learning: true 4-bit blocks by generation 5 in >=27/30 seeds",
    "c3": "dcga response rate: mean recovery in [4, 9] generations",
    "c4": "schem1/schem2 recovery within 2 generations for >=80% of changes",
    "c5": "schem2 warms up no later than schem1 in most paired seeds",
    "c6": "switching environment: 105/120 optima and 2-generation recovery",
    "c7": "mdl search vs exhaustive enumeration and naive rescoring",
    "c8": "sampling distribution properties on 1000 random tables",
}

_results: dict[str, list[tuple[str, bool]]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    match = re.search(r"test_(c\d+)_", report.nodeid)
    if match:
        _results.setdefault(match.group(1), []).append(
            (report.nodeid, report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(CRITERIA, key=lambda k: int(k[1:])):
        if key not in _results:
            continue
        outcomes = _results[key]
        ok = all(passed for _, passed in outcomes)
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(
            f"{status}  criterion {key[1:]}: {CRITERIA[key]} "
            f"({sum(p for _, p in outcomes)}/{len(outcomes)} checks)")

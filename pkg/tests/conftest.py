import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_ACCEPTANCE: list[tuple[str, str, str]] = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        doc = getattr(report, "criterion", report.nodeid.split("::")[-1])
        _ACCEPTANCE.append(("PASS" if report.passed else "FAIL", report.nodeid.split("::")[-1], doc))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for status, name, _ in _ACCEPTANCE:
        terminalreporter.write_line(f"[{status}] {name}")

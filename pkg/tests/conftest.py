import pytest

_CRITERIA: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for marker in report.keywords:
        if marker.startswith("criterion_"):
            status = "PASS" if report.passed else "FAIL"
            label = f"{marker[len('criterion_'):]} {report.nodeid.split('::')[-1]}"
            _CRITERIA[label] = status


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_CRITERIA, key=lambda s: int(s.split()[0])):
        terminalreporter.write_line(f"{_CRITERIA[label]}  criterion {label}")


def pytest_configure(config):
    for n in range(1, 9):
        config.addinivalue_line("markers", f"criterion_{n}: acceptance criterion {n}")

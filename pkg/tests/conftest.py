import pytest


def pytest_configure(config):
    config._acceptance_lines = {}


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line per acceptance criterion."""
    lines = request.config._acceptance_lines

    def record(number, passed, detail=""):
        status = "PASS" if passed else "FAIL"
        lines[number] = f"criterion {number:>2}: {status}  {detail}".rstrip()
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", {})
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(lines):
        terminalreporter.write_line(lines[n])

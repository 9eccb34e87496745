# keeps the tests directory importable so test modules can share helpers.py
import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo the acceptance checklist after the run.

    The acceptance tests record one verdict line each; printing them here
    keeps them visible in plain `pytest -v` output, where per-test stdout
    of passing tests is captured and discarded.
    """
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "REPORT_LINES", None) if mod else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

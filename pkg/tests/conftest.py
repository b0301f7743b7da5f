import sys


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if not lines:
        return
    terminalreporter.section("acceptance")
    for key in sorted(lines, key=lambda k: (len(k), k)):
        terminalreporter.write_line(lines[key])

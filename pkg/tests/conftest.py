"""Shared fixtures; collects the acceptance verdicts for the end-of-run summary."""

ACCEPTANCE_LINES = {}


def record(criterion: str, ok: bool, detail: str = "") -> str:
    line = f"criterion {criterion:<3} {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
    ACCEPTANCE_LINES[criterion] = line
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: (int("".join(c for c in k if c.isdigit())), k)):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])

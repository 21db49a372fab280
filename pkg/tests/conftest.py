"""Collects acceptance checklist lines and prints them after the run.

Plain prints inside tests vanish under pytest's default capture; routing
them through the terminal-summary hook keeps the checklist visible on an
ordinary `pytest -v`.
"""

acceptance_lines: list[str] = []


def record_acceptance(line: str) -> None:
    acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not acceptance_lines:
        return
    terminalreporter.section("acceptance checklist")
    for line in acceptance_lines:
        terminalreporter.write_line(line)

"""Shared test plumbing: collects acceptance verdict lines for the summary."""

acceptance_lines: list[str] = []


def record_acceptance(line: str) -> None:
    acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_lines:
        terminalreporter.section("acceptance verdicts")
        for line in acceptance_lines:
            terminalreporter.write_line(line)

import re


def pytest_terminal_summary(terminalreporter):
    """One pass/fail line per acceptance criterion at the end of the run."""
    lines = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            m = re.search(r"test_acceptance.*test_criterion_(\d+)", rep.nodeid)
            if m and rep.when == "call" or m and outcome == "error":
                status = "PASS" if outcome == "passed" else "FAIL"
                lines[int(m.group(1))] = status
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for num in sorted(lines):
            terminalreporter.write_line(f"acceptance criterion {num}: {lines[num]}")

import re

_CRITERION = re.compile(r"test_criterion_(\d+)_(\w+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    lines = {}
    for outcome, status in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for rep in terminalreporter.stats.get(outcome, []):
            m = _CRITERION.search(getattr(rep, "nodeid", ""))
            if m is None:
                continue
            if outcome == "passed" and getattr(rep, "when", "call") != "call":
                continue
            num, label = int(m.group(1)), m.group(2)
            if status == "FAIL" or num not in lines:
                lines[num] = (label, status)
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for num in sorted(lines):
            label, status = lines[num]
            terminalreporter.write_line(f"criterion {num} ({label}): {status}")

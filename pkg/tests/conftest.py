def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for report in terminalreporter.stats.get(outcome, []):
            props = dict(getattr(report, "user_properties", []))
            if "criterion" in props and report.when == "call":
                elapsed = props.get("elapsed")
                timing = f" ({elapsed:.3f} s)" if elapsed is not None else ""
                lines.append(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {props['criterion']}{timing}")
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s[6:8])):
            terminalreporter.write_line(line)

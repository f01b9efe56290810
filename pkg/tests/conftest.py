def pytest_terminal_summary(terminalreporter):
    rows = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when != "call" or "test_acceptance.py" not in rep.nodeid:
                continue
            detail = dict(rep.user_properties).get("acceptance", "")
            name = rep.nodeid.split("::")[-1]
            rows.append((name, "PASS" if outcome == "passed" else "FAIL", detail))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for name, status, detail in sorted(rows, key=lambda r: int(r[0].split("_")[2])):
        terminalreporter.write_line(f"{status}  {name}: {detail}")

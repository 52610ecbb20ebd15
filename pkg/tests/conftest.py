def pytest_terminal_summary(terminalreporter):
    """Echo the acceptance PASS/FAIL lines after capture is released."""
    try:
        from test_acceptance import RESULT_LINES
    except ImportError:
        return
    if RESULT_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULT_LINES):
            terminalreporter.write_line(line)

"""Shared test plumbing: the acceptance-criteria summary reporter."""

ACCEPTANCE_LINES: list[str] = []


def record_acceptance(number: int, name: str, ok: bool, detail: str = "") -> None:
    """Register one acceptance criterion verdict for the end-of-run summary."""
    verdict = "PASS" if ok else "FAIL"
    line = f"acceptance {number:02d} {name}: {verdict}"
    if detail:
        line += f" ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

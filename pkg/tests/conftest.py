import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Record one summary line per acceptance criterion."""

    def record(label, checks):
        ok = all(passed for _, passed, _ in checks)
        detail = "; ".join(
            f"{name}: {value} {'ok' if passed else 'FAIL'}" for name, passed, value in checks
        )
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {label} | {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

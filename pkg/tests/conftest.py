import pytest

VERDICTS: dict[int, tuple[str, bool, str]] = {}


@pytest.fixture
def verdict(request):
    """Record ``(criterion, name, ok, detail)``; printed in the terminal summary."""
    def record(number: int, name: str, ok: bool, detail: str) -> bool:
        VERDICTS[number] = (name, bool(ok), detail)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(VERDICTS):
        name, ok, detail = VERDICTS[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {n:2d} {name}: {detail}")

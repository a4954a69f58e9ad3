import pytest

_VERDICTS: list[tuple[int, str]] = []


@pytest.fixture
def verdict():
    """Record a PASS/FAIL line for an acceptance criterion; returns ``ok``."""

    def record(order: int, name: str, ok: bool, detail: str = "") -> bool:
        line = f"{'PASS' if ok else 'FAIL'} {name}" + (f": {detail}" if detail else "")
        _VERDICTS.append((order, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_VERDICTS):
            terminalreporter.write_line(line)

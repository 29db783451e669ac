import pytest

_ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


@pytest.fixture
def acceptance():
    """Record an acceptance outcome; the terminal summary prints one line per criterion."""

    def record(number: int, title: str, ok: bool, detail: str = ""):
        _ACCEPTANCE[number] = (title, bool(ok), detail)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, ok, detail = _ACCEPTANCE[number]
        line = f"{'PASS' if ok else 'FAIL'} [{number}] {title}"
        if detail:
            line += f": {detail}"
        terminalreporter.write_line(line)

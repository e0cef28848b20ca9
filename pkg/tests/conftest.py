import pytest

_criteria: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """``record(number, ok, detail)``: prints and stores one acceptance line."""

    def record(number, ok, detail):
        _criteria[number] = (bool(ok), detail)
        print(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        ok, detail = _criteria[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")

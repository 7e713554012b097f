import pytest

_RESULTS: dict[int, tuple[str, str]] = {}


class CriterionLog:
    def record(self, number: int, ok: bool | None, detail: str) -> None:
        status = {True: "PASS", False: "FAIL", None: "SKIP"}[ok]
        _RESULTS[number] = (status, detail)


@pytest.fixture(scope="session")
def criteria():
    return CriterionLog()


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        status, detail = _RESULTS[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {detail}")

import pytest

ACCEPTANCE: dict[int, tuple[str, str]] = {}


@pytest.fixture
def acceptance_record():
    return ACCEPTANCE


def pytest_runtest_makereport(item, call):
    number = getattr(item.function, "criterion", None)
    if number is not None and call.when == "call":
        status = "PASS" if call.excinfo is None else "FAIL"
        ACCEPTANCE[number] = (status, item.function.title)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        status, title = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {title}")

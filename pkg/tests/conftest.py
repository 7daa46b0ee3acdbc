import pytest

# criterion number -> (title, passed); filled by tests/test_acceptance.py
CRITERIA: dict[int, tuple[str, bool]] = {}


@pytest.fixture
def criterion(request):
    """Record the outcome of one acceptance criterion."""
    state = {}

    def start(number: int, title: str):
        state["key"] = (number, title)

    yield start
    if "key" in state:
        number, title = state["key"]
        rep = getattr(request.node, "rep_call", None)
        passed = rep is not None and rep.passed
        CRITERIA[number] = (title, passed)
        print(f"\nAC{number:02d} {'PASS' if passed else 'FAIL'}  {title}")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        title, passed = CRITERIA[number]
        terminalreporter.write_line(f"AC{number:02d} {'PASS' if passed else 'FAIL'}  {title}")

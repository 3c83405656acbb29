import pytest

_CRITERIA = {}


@pytest.fixture
def criterion(request):
    """Record a PASS/FAIL line for the acceptance criterion under test."""
    label = request.node.get_closest_marker("acceptance").args[0]
    _CRITERIA[label] = "FAIL"
    yield
    rep = getattr(request.node, "rep_call", None)
    if rep is not None and rep.passed:
        _CRITERIA[label] = "PASS"


@pytest.hookimpl(wrapper=True, tryfirst=True)
def pytest_runtest_makereport(item, call):
    rep = yield
    if rep.when == "call":
        item.rep_call = rep
    return rep


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_CRITERIA, key=lambda s: int(s.split()[0])):
        terminalreporter.write_line(f"{_CRITERIA[label]}  {label}")

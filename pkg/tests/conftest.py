import json
from pathlib import Path

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def golden():
    def load(name):
        return json.loads((GOLDEN / name).read_text(encoding="utf-8"))

    return load


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance line; the test's own asserts decide pass or fail."""
    number = request.node.get_closest_marker("criterion").args[0]
    details: list[str] = []
    ACCEPTANCE[number] = (False, "did not finish")
    yield details
    failed = getattr(request.node, "rep_call", None) is None or request.node.rep_call.failed
    ACCEPTANCE[number] = (not failed, "; ".join(details))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {number}: {detail}")

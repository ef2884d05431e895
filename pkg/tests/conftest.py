from __future__ import annotations

import pytest

from linsets.field import make_field

# criterion number -> (title, outcome)
_criteria: dict[int, list] = {}

LAST = "test_criterion_02_identities_for_every_enumerated_linear_set"


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion check")


def pytest_collection_modifyitems(session, config, items):
    # the identity audit covers every linear set enumerated earlier in the session
    last = [it for it in items if it.name == LAST]
    rest = [it for it in items if it.name != LAST]
    items[:] = rest + last


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    num, title = mark.args
    entry = _criteria.setdefault(num, [title, "PASS"])
    if rep.failed:
        entry[1] = "FAIL"
    elif rep.skipped and entry[1] == "PASS" and rep.when != "teardown":
        entry[1] = "SKIP"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        title, status = _criteria[num]
        terminalreporter.write_line(f"criterion {num:2d} {status}: {title}")


@pytest.fixture(scope="session")
def f16():
    return make_field(2, 1, 4)


@pytest.fixture(scope="session")
def f64():
    return make_field(2, 1, 6)


@pytest.fixture(scope="session")
def f27():
    return make_field(3, 1, 3)

import pytest

from hcn.hurwitz import build_table


@pytest.fixture(autouse=True)
def _no_cache(monkeypatch):
    # keep the test run independent of any user cache directory
    monkeypatch.delenv("HCN_CACHE_DIR", raising=False)


@pytest.fixture(scope="session")
def table():
    """H(0..8000): enough for every moment up to n = 2000."""
    return build_table(8000)


# -- acceptance summary ---------------------------------------------------------
#
# Tests marked @pytest.mark.criterion(n, "title") get one pass/fail line each
# at the end of the run.

_criteria: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _criteria[number] = (title, rep.passed, rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok, dur = _criteria[number]
        terminalreporter.write_line(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}  ({dur:.2f}s)")

from __future__ import annotations

import pytest

from nodepoly.engine import TemplateStore

_CRITERIA: list[tuple[str, str, str]] = []


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run the long reproduction checks")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="long-running; use --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        detail = getattr(item, "criterion_detail", "")
        _CRITERIA.append((marker.args[0], "PASS" if rep.passed else "FAIL", detail))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, status, detail in _CRITERIA:
        terminalreporter.write_line(f"{status}  {name}" + (f"  ({detail})" if detail else ""))


@pytest.fixture(scope="session")
def store(tmp_path_factory):
    """One template store (with an on-disk cache) shared by the whole session."""
    return TemplateStore(tmp_path_factory.mktemp("template-cache"))


@pytest.fixture
def report(request):
    """Attach a one-line summary to the current acceptance criterion."""
    def note(text: str) -> None:
        request.node.criterion_detail = text
        print(f"{request.node.get_closest_marker('criterion').args[0]}: {text}")
    return note

import pytest

from asymprimes.cli import corpus_names, load_corpus, run


@pytest.fixture(scope="session")
def corpus_reports():
    """One full run of every bundled instance, shared by the slow tests."""
    out = {}
    for name in corpus_names():
        problem = load_corpus(name)
        out[name] = (problem, run(problem))
    return out


# one pass/fail line per acceptance criterion, printed after the run

_criteria: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call":
        return
    n, title = mark.args
    _criteria[n] = (title, "PASS" if call.excinfo is None else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        title, outcome = _criteria[n]
        terminalreporter.write_line(f"criterion {n}: {outcome}  {title}")

import pytest

from cdspectrum.corpus_data import CORPUS, corpus_file, load_named

ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")
    config.addinivalue_line("markers", "slow: takes more than a few seconds")


@pytest.fixture(scope="session")
def corpus():
    return {name: load_named(name) for name in CORPUS}


@pytest.fixture(scope="session")
def lattice(corpus):
    return corpus["lattice2"]


@pytest.fixture(scope="session")
def implication(corpus):
    return corpus["implication2"]


@pytest.fixture(scope="session")
def majmin(corpus):
    return corpus["majmin2"]


@pytest.fixture(scope="session")
def baker(corpus):
    return corpus["baker2"]


@pytest.fixture(scope="session")
def trivial(corpus):
    return corpus["trivial"]


@pytest.fixture(scope="session")
def corpus_path():
    return lambda name: str(corpus_file(name))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        ok = report.outcome == "passed"
        prev = ACCEPTANCE.get(number, (True, title))
        ACCEPTANCE[number] = (prev[0] and ok, title)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, title = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}")

import os

import pytest

from aftkit import syntax

CORPUS = os.path.join(os.path.dirname(__file__), "corpus")


def corpus_path(name):
    return os.path.join(CORPUS, name)


def load(name):
    with open(corpus_path(name), encoding="utf-8") as fh:
        text = fh.read()
    return syntax.PARSERS[name.rsplit(".", 1)[1]](text)


@pytest.fixture
def E():
    return load("E.lp")


@pytest.fixture
def F():
    return load("F.ael")


@pytest.fixture
def T():
    return load("T.ael")


@pytest.fixture
def murder():
    return load("murder.dl")


# acceptance reporting: one line per criterion at the end of the run

_criteria: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    n, title = mark.args
    entry = _criteria.setdefault(n, {"title": title, "ok": True, "tests": 0})
    if rep.when == "call":
        entry["tests"] += 1
    if rep.failed:
        entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        e = _criteria[n]
        status = "PASS" if e["ok"] and e["tests"] else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status}  {e['title']}")

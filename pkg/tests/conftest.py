import pytest

from tockpri import lang
from tockpri.core import PriorityOrder
from tockpri.fl import denote_spec


@pytest.fixture(scope="session")
def corpus():
    return lang.builtin_corpus()


@pytest.fixture(scope="session")
def den(corpus):
    cache = {}

    def get(name, k):
        if (name, k) not in cache:
            cache[name, k] = denote_spec(corpus[name], k)
        return cache[name, k]

    return get


@pytest.fixture
def ab():
    return PriorityOrder.of(("a", "b"))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])

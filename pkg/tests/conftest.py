import pytest

from cosetra.algebra import build_full_algebra
from cosetra.fixtures import corpus
from cosetra.pair import make_triple


@pytest.fixture(scope="session")
def corpus_pairs():
    return corpus()


@pytest.fixture(scope="session")
def corpus_algebras(corpus_pairs):
    return [(name, P, build_full_algebra(make_triple(P))) for name, P in corpus_pairs]


_RESULTS: list[str] = []


@pytest.fixture(scope="session")
def criterion_log():
    return _RESULTS


def pytest_terminal_summary(terminalreporter):
    if _RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in _RESULTS:
            terminalreporter.write_line(line)

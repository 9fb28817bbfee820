import pytest

import corpus


@pytest.fixture(scope="session")
def n3_digraphs():
    return corpus.micro_universe()


@pytest.fixture(scope="session")
def random_digraphs():
    return corpus.random_corpus()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])

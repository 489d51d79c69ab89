import pytest

from injgen.algebra import Algebra
from injgen.fixtures import corpus_path, sec6_algebra, sec6_modules


@pytest.fixture(scope="session")
def sec6():
    return sec6_algebra()


@pytest.fixture(scope="session")
def sec6_named(sec6):
    return sec6_modules(sec6)


@pytest.fixture(scope="session")
def corpus():
    def load(name):
        return Algebra.load(corpus_path(name))
    return load


@pytest.fixture(scope="session")
def sec6_certificate(sec6):
    from injgen.search import derive_simple_targets, search_membership
    return search_membership(derive_simple_targets(sec6)).doc


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

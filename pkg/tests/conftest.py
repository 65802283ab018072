import pytest

from regtrees.expr import parse_tree
from regtrees.rules import builtin


@pytest.fixture
def kpz():
    return builtin("kpz")


@pytest.fixture
def gkpz():
    return builtin("gkpz")


@pytest.fixture
def phi43():
    return builtin("phi43")


@pytest.fixture
def hermite():
    return builtin("hermite")


@pytest.fixture
def tree():
    """Parser shortcut: tree(rule, text)."""
    return lambda rule, text: parse_tree(text, rule)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import VERDICTS
    except ImportError:
        return
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[n])

import pytest

from langcons.language import Automaton, RestrictedGrammar

RWR_TRANSITIONS = [
    ("qr", "r", "qr"), ("qr", "w", "qw"),
    ("qw", "w", "qw"), ("qw", "r", "qr2"),
    ("qr2", "r", "qr2"),
]


def make_rwr() -> Automaton:
    """r* w* r* over {r, w}; all three states accept."""
    return Automaton.dfa(["qr", "qw", "qr2"], ["r", "w"], RWR_TRANSITIONS, "qr", ["qr", "qw", "qr2"])


def make_ab_language() -> Automaton:
    """Accepts exactly "ab"."""
    return Automaton.dfa(["s0", "s1", "s2"], ["a", "b"], [("s0", "a", "s1"), ("s1", "b", "s2")],
                         "s0", ["s2"])


@pytest.fixture
def rwr():
    return make_rwr()


@pytest.fixture
def ab_grammar():
    return RestrictedGrammar.from_rules("S", [("S", ["A", "B"]), ("A", ["a"]), ("B", ["b"])])


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

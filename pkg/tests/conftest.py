"""Shared automata, grammar and net fixtures loaded from tests/fixtures/."""

import os

import pytest

from automata import load_nfa
from grammars import load_cfg, to_cnf
from ocn import Config, load_ocn

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def fixture_path(name):
    return os.path.join(FIXTURES, name)


@pytest.fixture
def fig1():
    """(b*a)* over states q1, q2."""
    return load_nfa(fixture_path("fig1.nfa"))


@pytest.fixture
def fig2a1():
    """a*(a+b+c), alphabet declared as c a b."""
    return load_nfa(fixture_path("fig2a1.nfa"))


@pytest.fixture
def fig2a2():
    """a*(a(a+b)*a + a+c + ab + bb) over states q1..q5."""
    return load_nfa(fixture_path("fig2a2.nfa"))


@pytest.fixture
def fig4():
    """(b+ab*a)(a+b)* over states q1, q2, q3."""
    return load_nfa(fixture_path("fig4.nfa"))


@pytest.fixture
def bgfp():
    return load_nfa(fixture_path("bgfp.nfa"))


@pytest.fixture
def a_star():
    return load_nfa(fixture_path("a_star.nfa"))


@pytest.fixture
def a_star_b():
    return load_nfa(fixture_path("a_star_b.nfa"))


@pytest.fixture
def gex():
    """X0 -> X0 X1 | X1 X0 | b, X1 -> a; the language a*ba*."""
    return load_cfg(fixture_path("gex.cfg"))


@pytest.fixture
def gex_cnf(gex):
    return to_cnf(gex)


@pytest.fixture
def fig3ocn():
    return load_ocn(fixture_path("fig3.ocn"))


@pytest.fixture
def q10():
    return Config("q1", 0)

import itertools

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from trekdet.graphs import MixedGraph, lambda_var, omega_var
from trekdet.polynomial import Polynomial

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def mixed(n, directed=(), bidirected=()):
    return MixedGraph(tuple(range(1, n + 1)), frozenset(directed), frozenset(bidirected))


def lam(i, j):
    return Polynomial.var(lambda_var(i, j))


def om(i, j):
    return Polynomial.var(omega_var(i, j))


@pytest.fixture
def edge12():
    return mixed(2, [(1, 2)])


@pytest.fixture
def two_cycle():
    return mixed(2, [(1, 2), (2, 1)])


@pytest.fixture
def figure1():
    """The fork-and-rejoin shape: a=1 b=2 c=3 d=4 e=5 f=6 i=7 j=8."""
    edges = [(1, 2), (2, 3), (2, 4), (4, 3), (3, 5), (3, 6), (6, 5), (5, 7), (5, 8)]
    return mixed(8, edges)


@st.composite
def mixed_dags(draw, max_vertices=4):
    n = draw(st.integers(1, max_vertices))
    order = draw(st.permutations(range(1, n + 1)))
    pairs = list(itertools.combinations(range(n), 2))
    directed = [(order[a], order[b]) for a, b in pairs if draw(st.booleans())]
    bidirected = [tuple(sorted((order[a], order[b]))) for a, b in pairs if draw(st.integers(0, 3)) == 0]
    return mixed(n, directed, bidirected)


@st.composite
def digraphs(draw, max_vertices=4):
    n = draw(st.integers(1, max_vertices))
    pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    directed = [e for e in pairs if draw(st.integers(0, 2)) == 0]
    return mixed(n, directed)


@st.composite
def vertex_lists(draw, g, max_size=2):
    k = draw(st.integers(0, min(max_size, len(g.vertices))))
    A = draw(st.permutations(g.vertices))[:k]
    B = draw(st.permutations(g.vertices))[:k]
    return tuple(A), tuple(B)


# -- acceptance reporting ------------------------------------------------------

ACCEPTANCE_CRITERIA = 10
_acceptance_lines = {}


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line for a numbered criterion."""

    def record(number, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
        _acceptance_lines[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_lines:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, ACCEPTANCE_CRITERIA + 1):
        terminalreporter.write_line(_acceptance_lines.get(n, f"FAIL criterion {n}: did not complete"))

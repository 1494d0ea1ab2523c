import os

import numpy as np
import pytest

from egognn.graph import Graph, load_graph

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def fixture_path(name):
    return os.path.join(FIXTURES, name)


@pytest.fixture
def c3():
    return load_graph(fixture_path("c3.json"))


@pytest.fixture
def c6():
    return load_graph(fixture_path("c6.json"))


@pytest.fixture
def two_c3():
    return load_graph(fixture_path("2c3.json"))


@pytest.fixture
def k13():
    return load_graph(fixture_path("k13.json"))


@pytest.fixture
def p4():
    return load_graph(fixture_path("p4.json"))


@pytest.fixture
def k4():
    return load_graph(fixture_path("k4.json"))


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n):
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star(leaves):
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def edgeless(n):
    return Graph.from_edges(n, [])

import math
from fractions import Fraction

import pytest

import qglab
from qglab import Edge, ExactLength, MetricGraph, parse_graph


def mk(vertices, edge_spec, units):
    """edge_spec: list of (id, origin, terminus, coeff, unit)."""
    edges = [Edge(i, o, t, ExactLength(Fraction(c), u))
             for i, o, t, c, u in edge_spec]
    return MetricGraph.build(vertices, edges, units)


@pytest.fixture(scope="session")
def dumbbell():
    return parse_graph(qglab.bundled_graph_path("dumbbell.qg"))


@pytest.fixture(scope="session")
def loop_pendant():
    return parse_graph(qglab.bundled_graph_path("loop-pendant.qg"))


@pytest.fixture(scope="session")
def interval_pi():
    return parse_graph(qglab.bundled_graph_path("interval-pi.qg"))


@pytest.fixture(scope="session")
def unit_triangle():
    return parse_graph(qglab.bundled_graph_path("triangle.qg"))


@pytest.fixture(scope="session")
def path3():
    return parse_graph(qglab.bundled_graph_path("tree.qg"))


@pytest.fixture
def unit_loop():
    return mk(["w"], [("e", "w", "w", 1, "one")], {"one": 1.0})


@pytest.fixture
def theta():
    # two vertices joined by three parallel unit edges
    return mk(["u", "v"],
              [("e1", "u", "v", 1, "one"),
               ("e2", "u", "v", 1, "one"),
               ("e3", "u", "v", 1, "one")],
              {"one": 1.0})


@pytest.fixture
def two_triangles_shared_vertex():
    # two unit triangles glued at one vertex (the dashed part of dumbbell)
    return mk(["c", "a1", "a2", "b1", "b2"],
              [("t1", "c", "a1", 1, "one"), ("t2", "c", "a2", 1, "one"),
               ("t3", "a1", "a2", 1, "one"),
               ("u1", "c", "b1", 1, "one"), ("u2", "c", "b2", 1, "one"),
               ("u3", "b1", "b2", 1, "one")],
              {"one": 1.0})


PI = math.pi

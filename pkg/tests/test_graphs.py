import random
from itertools import combinations

import pytest

from qglab import (betti, betti_graph, core_decomposition, cycle_system,
                   simple_cycles, validate)
from qglab.graphs import CycleBudgetExceeded

from conftest import mk
from randgraphs import random_graph


# ---------------------------------------------------------------------------
# validate


def test_validate_minimal_graph():
    g = mk(["v1", "v2"], [("e1", "v1", "v2", 1, "u")], {"u": 1.0})
    assert validate(g) == []


def test_validate_unknown_vertex():
    g = mk(["v1", "v2"], [("e1", "v1", "v9", 1, "u")], {"u": 1.0})
    assert any("unknown-vertex" in p and "v9" in p for p in validate(g))


def test_validate_nonpositive_length():
    g = mk(["v1", "v2"], [("e1", "v1", "v2", 0, "u")], {"u": 1.0})
    assert any("nonpositive-length" in p for p in validate(g))


# ---------------------------------------------------------------------------
# betti


def test_betti_single_edge():
    g = mk(["v1", "v2"], [("e1", "v1", "v2", 1, "u")], {"u": 1.0})
    b = betti_graph(g)
    assert (b.beta0, b.beta1) == (1, 0)


def test_betti_loop(unit_loop):
    b = betti_graph(unit_loop)
    assert (b.beta0, b.beta1) == (1, 1)


def test_betti_dumbbell(dumbbell):
    b = betti_graph(dumbbell)
    assert (b.beta0, b.beta1) == (1, 6)


def test_betti_disconnected():
    g = mk(["a", "b", "c", "d"],
           [("e1", "a", "b", 1, "u"), ("e2", "c", "d", 1, "u"),
            ("e3", "c", "d", 1, "u")], {"u": 1.0})
    b = betti_graph(g)
    assert (b.beta0, b.beta1) == (2, 1)


# ---------------------------------------------------------------------------
# core decomposition


def test_core_of_path_is_empty(path3):
    cd = core_decomposition(path3)
    assert cd.core_edges == ()
    assert set(cd.boundary_vertices) == {"v1", "v4"}
    assert cd.proper_core_vertices == ()


def test_core_loop_pendant(loop_pendant):
    cd = core_decomposition(loop_pendant)
    assert cd.core_edges == ("e2",)
    assert cd.boundary_vertices == ("v",)
    # the loop vertex carries the pendant edge, so it is not proper
    assert cd.proper_core_vertices == ()
    assert cd.pendant_root["e1"] == "w"


def test_core_dumbbell(dumbbell):
    cd = core_decomposition(dumbbell)
    assert set(cd.core_edges) == {e.id for e in dumbbell.edges} - {"p1"}
    assert cd.boundary_vertices == ("x",)
    assert set(cd.proper_core_vertices) == {"c", "tl", "tr", "bl", "br", "ll"}


def test_core_idempotent(dumbbell):
    cd = core_decomposition(dumbbell)
    core_graph = mk(
        cd.core_vertices,
        [(e.id, e.origin, e.terminus, e.length.coeff, e.length.unit)
         for e in dumbbell.edges if e.id in cd.core_edges],
        dict(dumbbell.units.entries))
    cd2 = core_decomposition(core_graph)
    assert set(cd2.core_edges) == set(cd.core_edges)


# ---------------------------------------------------------------------------
# cycle system


def test_cycle_system_tree(path3):
    cs = cycle_system(path3.vertices, path3.edges)
    assert cs.chords == ()
    assert cs.cycles == ()


def test_cycle_system_triangle(unit_triangle):
    cs = cycle_system(unit_triangle.vertices, unit_triangle.edges)
    assert len(cs.chords) == 1
    assert len(cs.cycles[0].steps) == 3


def test_cycle_system_two_triangles(two_triangles_shared_vertex):
    g = two_triangles_shared_vertex
    cs = cycle_system(g.vertices, g.edges)
    assert len(cs.chords) == 2
    sets = [set(c.edge_ids()) for c in cs.cycles]
    assert sets[0].isdisjoint(sets[1])
    assert all(len(s) == 3 for s in sets)


def test_cycle_walks_are_closed(dumbbell):
    edges_by_id = {e.id: e for e in dumbbell.edges}
    cs = cycle_system(dumbbell.vertices, dumbbell.edges)
    for cyc in cs.cycles:
        seq = cyc.vertex_sequence(edges_by_id)
        assert seq[0] == seq[-1] == cyc.start


def test_cycle_system_deterministic(dumbbell):
    a = cycle_system(dumbbell.vertices, dumbbell.edges)
    b = cycle_system(dumbbell.vertices, dumbbell.edges)
    assert a == b


# ---------------------------------------------------------------------------
# simple cycles


def subset_cycle_count(graph):
    """Independent oracle: a simple cycle is an edge subset where every
    touched vertex has degree two and the subset is connected."""
    def is_cycle(sub):
        deg = {}
        for e in sub:
            deg[e.origin] = deg.get(e.origin, 0) + 1
            deg[e.terminus] = deg.get(e.terminus, 0) + 1
        if any(d != 2 for d in deg.values()):
            return False
        vs = set(deg)
        adj = {v: set() for v in vs}
        for e in sub:
            adj[e.origin].add(e.terminus)
            adj[e.terminus].add(e.origin)
        start = next(iter(vs))
        seen, stack = {start}, [start]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen == vs

    return sum(1 for r in range(1, len(graph.edges) + 1)
               for sub in combinations(graph.edges, r) if is_cycle(sub))


def test_simple_cycles_loop(unit_loop):
    assert len(simple_cycles(unit_loop.vertices, unit_loop.edges)) == 1


def test_simple_cycles_theta(theta):
    cycles = simple_cycles(theta.vertices, theta.edges)
    assert len(cycles) == 3
    assert all(len(c.steps) == 2 for c in cycles)


def test_simple_cycles_dumbbell_against_subset_oracle(dumbbell):
    cycles = simple_cycles(dumbbell.vertices, dumbbell.edges)
    assert len(cycles) == 32
    assert len(cycles) == subset_cycle_count(dumbbell)


def test_simple_cycles_random_against_subset_oracle():
    rng = random.Random(7)
    for _ in range(25):
        g = random_graph(rng, max_vertices=5, max_edges=7)
        cycles = simple_cycles(g.vertices, g.edges)
        assert len(cycles) == subset_cycle_count(g)


def test_simple_cycles_budget(dumbbell):
    with pytest.raises(CycleBudgetExceeded):
        simple_cycles(dumbbell.vertices, dumbbell.edges, budget=3)


def test_cycles_lie_in_core(dumbbell):
    cd = core_decomposition(dumbbell)
    for cyc in simple_cycles(dumbbell.vertices, dumbbell.edges):
        assert set(cyc.edge_ids()) <= set(cd.core_edges)


# ---------------------------------------------------------------------------
# cross-invariants


def test_beta1_equals_chord_count_random():
    rng = random.Random(11)
    for _ in range(50):
        g = random_graph(rng)
        b = betti_graph(g)
        cs = cycle_system(g.vertices, g.edges)
        assert b.beta1 == len(cs.chords)


def test_deleting_chord_drops_beta1_by_one(dumbbell):
    cs = cycle_system(dumbbell.vertices, dumbbell.edges)
    b1 = betti_graph(dumbbell).beta1
    for chord in cs.chords:
        rest = [e for e in dumbbell.edges if e.id != chord]
        assert betti(dumbbell.vertices, rest).beta1 == b1 - 1

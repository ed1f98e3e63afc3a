import math
import random
from fractions import Fraction

import pytest

from qglab import MetricGraph, Step, build_lambda_subgraph, candidate_steps, resonance_floor
from qglab.lengths import fraction_gcd

from conftest import mk
from randgraphs import all_steps, random_graph


def test_dumbbell_step_one(dumbbell):
    sub = build_lambda_subgraph(dumbbell, Step(Fraction(1), "one"))
    assert {e.id for e in sub.edges} == {"d1", "d2", "d3", "d4", "d5", "d6"}
    assert all(n == 1 for _, n in sub.members)


def test_dumbbell_step_half_sqrt3(dumbbell):
    sub = build_lambda_subgraph(dumbbell, Step(Fraction(1, 2), "sqrt3"))
    assert {e.id for e in sub.edges} == {"s1", "s2", "s3", "s4", "s5", "s6"}
    assert all(n == 2 for _, n in sub.members)


def test_unused_unit_gives_empty_subgraph(dumbbell):
    g = mk(["a", "b"], [("e", "a", "b", 1, "one")], {"one": 1.0, "ghost": 2.5})
    sub = build_lambda_subgraph(g, Step(Fraction(1), "ghost"))
    assert sub.is_empty()


def test_unknown_unit_rejected(dumbbell):
    with pytest.raises(KeyError):
        build_lambda_subgraph(dumbbell, Step(Fraction(1), "nope"))


# ---------------------------------------------------------------------------
# candidate steps


def test_dumbbell_first_four_candidates(dumbbell):
    cands = candidate_steps(dumbbell, 14)
    got = [(c.step.coeff, c.step.unit) for c in cands]
    assert got == [(Fraction(1), "sqrt3"), (Fraction(1, 2), "pi"),
                   (Fraction(1), "one"), (Fraction(1, 2), "sqrt3")]
    lams = [c.lam for c in cands]
    expected = [math.pi ** 2 / 3, 4.0, math.pi ** 2, 4 * math.pi ** 2 / 3]
    assert lams == pytest.approx(expected, rel=1e-12)


def test_single_edge_candidates():
    g = mk(["a", "b"], [("e", "a", "b", 1, "one")], {"one": 1.0})
    cands = candidate_steps(g, 50)
    assert [(c.step.coeff, c.step.unit) for c in cands] == \
        [(Fraction(1), "one"), (Fraction(1, 2), "one")]


def test_cutoff_below_smallest_lambda_is_empty():
    g = mk(["a", "b"], [("e", "a", "b", 1, "one")], {"one": 1.0})
    assert candidate_steps(g, math.pi ** 2 / 2) == []


def test_candidate_completeness_random():
    rng = random.Random(3)
    for _ in range(20):
        g = random_graph(rng)
        lam_max = 60.0
        cands = candidate_steps(g, lam_max)
        listed = {(c.step.coeff, c.step.unit) for c in cands}
        for c in cands:
            assert not build_lambda_subgraph(g, c.step).is_empty()
        # steps just off the list give empty subgraphs below the cutoff
        for step in all_steps(g, n_max=4):
            lam = step.lambda_value(g)
            if lam <= lam_max and (step.coeff, step.unit) not in listed:
                assert build_lambda_subgraph(g, step).is_empty()


# ---------------------------------------------------------------------------
# exactness


def test_membership_independent_of_approximations(dumbbell):
    perturbed = MetricGraph.build(
        dumbbell.vertices, dumbbell.edges,
        {t: a * (1 + 0.37 * i) for i, (t, a) in enumerate(dumbbell.units.entries)})
    for step in all_steps(dumbbell, n_max=6):
        a = build_lambda_subgraph(dumbbell, step)
        b = build_lambda_subgraph(perturbed, step)
        assert [(e.id, n) for e, n in a.members] == [(e.id, n) for e, n in b.members]


def test_monotone_nesting(dumbbell):
    base = Step(Fraction(1), "one")
    fine = Step(Fraction(1, 3), "one")
    coarse = build_lambda_subgraph(dumbbell, base)
    refined = build_lambda_subgraph(dumbbell, fine)
    for e, n in coarse.members:
        assert refined.multiplicity(e.id) == 3 * n


def test_fraction_gcd():
    assert fraction_gcd(Fraction(3, 2), Fraction(1)) == Fraction(1, 2)
    assert fraction_gcd(Fraction(4, 3), Fraction(2, 3)) == Fraction(2, 3)
    assert fraction_gcd(Fraction(1, 6), Fraction(1, 4)) == Fraction(1, 12)


def test_gcd_law_on_floor_witness(dumbbell):
    floor = resonance_floor(dumbbell)
    u = floor.unit_length
    edges_by_id = {e.id: e for e in dumbbell.edges}
    for eid in floor.cycle.edge_ids():
        ratio = edges_by_id[eid].length.coeff / u.coeff
        assert ratio.denominator == 1
    # no larger rational multiple divides every edge of the witness cycle
    coeffs = [edges_by_id[eid].length.coeff for eid in floor.cycle.edge_ids()]
    g = coeffs[0]
    for c in coeffs[1:]:
        g = fraction_gcd(g, c)
    assert g == u.coeff


# ---------------------------------------------------------------------------
# resonance floor


def test_floor_loop_pendant(loop_pendant):
    floor = resonance_floor(loop_pendant)
    assert floor.lam == pytest.approx(math.pi ** 2, rel=1e-12)
    assert floor.unit_length == Step(Fraction(1), "one")


def test_floor_dumbbell(dumbbell):
    floor = resonance_floor(dumbbell)
    assert floor.lam == pytest.approx(math.pi ** 2 / 3, rel=1e-12)
    assert floor.unit_length == Step(Fraction(1), "sqrt3")


def test_floor_tree_is_infinite(path3):
    floor = resonance_floor(path3)
    assert math.isinf(floor.lam)
    assert floor.cycle is None


def test_floor_incommensurate_cycle():
    # triangle with mixed units has no commensurate cycle
    g = mk(["a", "b", "c"],
           [("e1", "a", "b", 1, "u1"), ("e2", "b", "c", 1, "u1"),
            ("e3", "c", "a", 1, "u2")],
           {"u1": 1.0, "u2": 1.4142135623730951})
    assert math.isinf(resonance_floor(g).lam)

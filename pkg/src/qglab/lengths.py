"""Exact commensurability arithmetic for edge lengths.

Lengths are positive rationals times a declared unit token; a candidate step
s = coeff*unit encodes the spectral point lambda = pi^2 / s^2.  Membership of
an edge in the step subgraph is an exact rational divisibility test and never
depends on the floating approximations of the units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .graphs import CycleWalk, Edge, MetricGraph, simple_cycles


@dataclass(frozen=True)
class Step:
    """Half-wavelength s = coeff*unit; encodes lambda = pi^2/s^2."""

    coeff: Fraction
    unit: str

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        if self.coeff <= 0:
            raise ValueError("step coefficient must be positive")

    def value(self, graph: MetricGraph) -> float:
        return float(self.coeff) * graph.units.approx(self.unit)

    def lambda_value(self, graph: MetricGraph) -> float:
        s = self.value(graph)
        return math.pi ** 2 / s ** 2

    def __str__(self):
        return f"{self.coeff}*{self.unit}"


@dataclass(frozen=True)
class LambdaSubgraph:
    """Edges whose length is a natural multiple of the step, with counts."""

    step: Step
    members: tuple[tuple[Edge, int], ...]   # (edge, n) with L(e) = n*s
    vertices: tuple[str, ...]               # induced vertex set

    @property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(e for e, _ in self.members)

    def multiplicity(self, edge_id: str) -> int:
        for e, n in self.members:
            if e.id == edge_id:
                return n
        raise KeyError(f"edge {edge_id!r} not in subgraph")

    def is_empty(self) -> bool:
        return not self.members


def build_lambda_subgraph(graph: MetricGraph, step: Step) -> LambdaSubgraph:
    """Subgraph of edges with L(e) = n*s for a positive integer n (exact)."""
    if step.unit not in graph.units:
        raise KeyError(f"step unit {step.unit!r} not declared in graph")
    members = []
    for e in graph.edges:
        if e.length.unit != step.unit:
            continue
        ratio = e.length.coeff / step.coeff
        if ratio.denominator == 1 and ratio.numerator >= 1:
            members.append((e, ratio.numerator))
    verts = tuple(v for v in graph.vertices
                  if any(v in (e.origin, e.terminus) for e, _ in members))
    return LambdaSubgraph(step, tuple(members), verts)


def build_lambda_subgraph_numeric(graph: MetricGraph, lam: float,
                                  rel_tol: float = 1e-9) -> tuple[LambdaSubgraph, list[str]]:
    """Tolerance-based fallback for a user-supplied floating lambda.

    Not certified: membership uses the unit approximations.  Returns the
    subgraph together with warnings; when a matching exact candidate step
    exists, prefer `build_lambda_subgraph`.
    """
    warnings = [f"numeric subgraph membership at lambda={lam!r} "
                f"(rel_tol={rel_tol}); result is not certified"]
    s = math.pi / math.sqrt(lam)
    members = []
    step: Optional[Step] = None
    for e in graph.edges:
        ln = e.length.value(graph.units)
        n = round(ln / s)
        if n >= 1 and abs(ln - n * s) <= rel_tol * max(1.0, ln):
            members.append((e, n))
            if step is None:
                step = Step(e.length.coeff / n, e.length.unit)
    if step is None:
        step = Step(Fraction(1), graph.units.tokens()[0])
    verts = tuple(v for v in graph.vertices
                  if any(v in (e.origin, e.terminus) for e, _ in members))
    return LambdaSubgraph(step, tuple(members), verts), warnings


@dataclass(frozen=True)
class CandidateStep:
    step: Step
    lam: float


def candidate_steps(graph: MetricGraph, lambda_max: float) -> list[CandidateStep]:
    """All distinct steps s = L(e)/n with pi^2/s^2 <= lambda_max.

    These are exactly the spectral points where the step subgraph is
    nonempty.  Sorted by ascending lambda (unit approximations are used for
    ordering only); deduplicated by exact (coeff, unit).
    """
    if lambda_max <= 0:
        raise ValueError("lambda_max must be positive")
    smin = math.pi / math.sqrt(lambda_max)
    seen: set[tuple[Fraction, str]] = set()
    out = []
    for e in graph.edges:
        ln = e.length.value(graph.units)
        nmax = int(math.floor(ln / smin + 1e-12))
        for n in range(1, nmax + 1):
            coeff = e.length.coeff / n
            key = (coeff, e.length.unit)
            if key in seen:
                continue
            seen.add(key)
            step = Step(coeff, e.length.unit)
            lam = step.lambda_value(graph)
            if lam <= lambda_max * (1 + 1e-12):
                out.append(CandidateStep(step, lam))
    out.sort(key=lambda c: c.lam)
    return out


def fraction_gcd(a: Fraction, b: Fraction) -> Fraction:
    """gcd(p1/q1, p2/q2) = gcd(p1, p2) / lcm(q1, q2)."""
    num = math.gcd(a.numerator, b.numerator)
    den = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
    return Fraction(num, den)


@dataclass(frozen=True)
class ResonanceFloor:
    """Lower bound below which no resonance exists, with its witness cycle."""

    lam: float                       # may be math.inf
    unit_length: Optional[Step]      # the maximizing common unit u_C
    cycle: Optional[CycleWalk]


def resonance_floor(graph: MetricGraph, budget: int = 10 ** 6) -> ResonanceFloor:
    """inf of pi^2/u_C^2 over cycles C with commensurate edges.

    A cycle is commensurate iff all its edges carry the same unit token
    (units are declared pairwise incommensurable); u_C is the gcd of the
    rational coefficients times that unit.
    """
    edges_by_id = {e.id: e for e in graph.edges}
    best_val = -math.inf
    best: Optional[tuple[Step, CycleWalk]] = None
    for cyc in simple_cycles(graph.vertices, graph.edges, budget=budget):
        units = {edges_by_id[eid].length.unit for eid in cyc.edge_ids()}
        if len(units) != 1:
            continue
        unit = units.pop()
        g = Fraction(0)
        for eid in cyc.edge_ids():
            g = fraction_gcd(g, edges_by_id[eid].length.coeff) if g else edges_by_id[eid].length.coeff
        u = Step(g, unit)
        val = u.value(graph)
        if val > best_val:
            best_val = val
            best = (u, cyc)
    if best is None:
        return ResonanceFloor(math.inf, None, None)
    u, cyc = best
    return ResonanceFloor(math.pi ** 2 / best_val ** 2, u, cyc)

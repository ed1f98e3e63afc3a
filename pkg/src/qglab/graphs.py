"""Metric graph data model and combinatorial machinery.

Graphs are stored with a fixed edge orientation (origin, terminus); loops and
parallel edges are allowed everywhere.  All functions here are pure and the
data types are immutable, so they can be used from worker processes without
locking.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class CycleBudgetExceeded(RuntimeError):
    """Raised when simple-cycle enumeration exceeds its configured budget."""


@dataclass(frozen=True)
class ExactLength:
    """Positive rational coefficient times a declared irrational-unit token."""

    coeff: Fraction
    unit: str

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))

    def value(self, units: "UnitTable") -> float:
        return float(self.coeff) * units.approx(self.unit)

    def __str__(self):
        return f"{self.coeff}*{self.unit}"


@dataclass(frozen=True)
class UnitTable:
    """Declared length units with positive decimal approximations.

    Units are declared pairwise incommensurable by the user; nothing here
    tries to infer commensurability from the approximations, which are used
    for ordering and reporting only.
    """

    entries: tuple[tuple[str, float], ...]

    @classmethod
    def of(cls, mapping: Mapping[str, float] | Iterable[tuple[str, float]]) -> "UnitTable":
        items = tuple(mapping.items()) if isinstance(mapping, Mapping) else tuple(mapping)
        return cls(items)

    def tokens(self) -> tuple[str, ...]:
        return tuple(t for t, _ in self.entries)

    def approx(self, token: str) -> float:
        for t, a in self.entries:
            if t == token:
                return a
        raise KeyError(f"unknown unit {token!r}")

    def __contains__(self, token: str) -> bool:
        return any(t == token for t, _ in self.entries)


@dataclass(frozen=True)
class Edge:
    id: str
    origin: str
    terminus: str
    length: ExactLength

    @property
    def is_loop(self) -> bool:
        return self.origin == self.terminus


@dataclass(frozen=True)
class MetricGraph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    units: UnitTable

    @classmethod
    def build(cls, vertices: Sequence[str], edges: Sequence[Edge],
              units: UnitTable | Mapping[str, float]) -> "MetricGraph":
        if not isinstance(units, UnitTable):
            units = UnitTable.of(units)
        return cls(tuple(vertices), tuple(edges), units)

    def edge(self, edge_id: str) -> Edge:
        for e in self.edges:
            if e.id == edge_id:
                return e
        raise KeyError(f"unknown edge {edge_id!r}")

    def degree(self, v: str) -> int:
        d = 0
        for e in self.edges:
            d += (e.origin == v) + (e.terminus == v)
        return d

    def total_length(self) -> float:
        return sum(e.length.value(self.units) for e in self.edges)


def validate(graph: MetricGraph) -> list[str]:
    """Check the MetricGraph invariants; returns a list of violations."""
    problems = []
    if not graph.vertices:
        problems.append("empty-graph: no vertices declared")
    seen_v = set()
    for v in graph.vertices:
        if v in seen_v:
            problems.append(f"duplicate-vertex: {v}")
        seen_v.add(v)
    seen_e = set()
    for e in graph.edges:
        if e.id in seen_e:
            problems.append(f"duplicate-edge: {e.id}")
        seen_e.add(e.id)
        for v in (e.origin, e.terminus):
            if v not in seen_v:
                problems.append(f"unknown-vertex: edge {e.id} references {v}")
        if e.length.coeff <= 0:
            problems.append(f"nonpositive-length: edge {e.id}")
        if e.length.unit not in graph.units:
            problems.append(f"unknown-unit: edge {e.id} uses {e.length.unit!r}")
    return problems


# ---------------------------------------------------------------------------
# Connectivity and Betti numbers


@dataclass(frozen=True)
class BettiData:
    beta0: int
    beta1: int


def connected_components(vertices: Sequence[str],
                         edges: Sequence[Edge]) -> list[tuple[tuple[str, ...], tuple[Edge, ...]]]:
    """Components as (vertex tuple, edge tuple), deterministic by vertex order."""
    adj: dict[str, list[str]] = {v: [] for v in vertices}
    for e in edges:
        adj[e.origin].append(e.terminus)
        adj[e.terminus].append(e.origin)
    seen: set[str] = set()
    comps = []
    for v in vertices:
        if v in seen:
            continue
        stack, comp = [v], set()
        seen.add(v)
        while stack:
            u = stack.pop()
            comp.add(u)
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        cvs = tuple(u for u in vertices if u in comp)
        ces = tuple(e for e in edges if e.origin in comp)
        comps.append((cvs, ces))
    return comps


def betti(vertices: Sequence[str], edges: Sequence[Edge]) -> BettiData:
    beta0 = len(connected_components(vertices, edges))
    beta1 = len(edges) - len(vertices) + beta0
    return BettiData(beta0=beta0, beta1=beta1)


def betti_graph(graph: MetricGraph) -> BettiData:
    return betti(graph.vertices, graph.edges)


# ---------------------------------------------------------------------------
# Core decomposition


@dataclass(frozen=True)
class CoreDecomposition:
    core_edges: tuple[str, ...]
    core_vertices: tuple[str, ...]
    boundary_vertices: tuple[str, ...]      # degree one in the full graph
    proper_core_vertices: tuple[str, ...]   # all incident edges in the core
    pendant_root: dict[str, str | None] = field(default_factory=dict)
    # pendant_root: non-core edge id -> vertex where its pendant tree meets the
    # core (None when the whole component is a tree and has no core).


def core_decomposition(graph: MetricGraph) -> CoreDecomposition:
    """Iteratively strip degree-one vertices; what remains is the core."""
    alive_e = {e.id for e in graph.edges}
    alive_v = set(graph.vertices)
    while True:
        deg = {v: 0 for v in alive_v}
        for e in graph.edges:
            if e.id in alive_e:
                deg[e.origin] += 1
                deg[e.terminus] += 1
        strip = [v for v in alive_v if deg[v] <= 1]
        if not strip:
            break
        for v in strip:
            alive_v.discard(v)
        alive_e = {e.id for e in graph.edges
                   if e.id in alive_e and e.origin in alive_v and e.terminus in alive_v}

    core_edges = tuple(e.id for e in graph.edges if e.id in alive_e)
    core_vertices = tuple(v for v in graph.vertices if v in alive_v)
    boundary = tuple(v for v in graph.vertices if graph.degree(v) == 1)
    proper = tuple(
        v for v in core_vertices
        if all(e.id in alive_e for e in graph.edges if v in (e.origin, e.terminus))
    )

    # Assign each pendant (non-core) edge to the core vertex its tree hangs
    # from, by BFS from the core over non-core edges.
    pendant_edges = [e for e in graph.edges if e.id not in alive_e]
    root: dict[str, str | None] = {e.id: None for e in pendant_edges}
    vert_root: dict[str, str] = {v: v for v in core_vertices}
    frontier = list(core_vertices)
    adj: dict[str, list[Edge]] = {v: [] for v in graph.vertices}
    for e in pendant_edges:
        adj[e.origin].append(e)
        adj[e.terminus].append(e)
    while frontier:
        nxt = []
        for v in frontier:
            for e in adj[v]:
                if root[e.id] is not None:
                    continue
                root[e.id] = vert_root[v]
                w = e.terminus if e.origin == v else e.origin
                if w not in vert_root:
                    vert_root[w] = vert_root[v]
                    nxt.append(w)
        frontier = nxt
    return CoreDecomposition(core_edges, core_vertices, boundary, proper, root)


# ---------------------------------------------------------------------------
# Spanning forests, fundamental cycles


@dataclass(frozen=True)
class CycleWalk:
    """Closed oriented edge walk: steps (edge id, +1 forward / -1 backward)."""

    start: str
    steps: tuple[tuple[str, int], ...]

    def edge_ids(self) -> tuple[str, ...]:
        return tuple(eid for eid, _ in self.steps)

    def vertex_sequence(self, graph_edges: Mapping[str, Edge]) -> tuple[str, ...]:
        """Vertices visited, starting and ending at `start`."""
        seq = [self.start]
        for eid, d in self.steps:
            e = graph_edges[eid]
            seq.append(e.terminus if d > 0 else e.origin)
        return tuple(seq)

    def rotated_to(self, v: str, graph_edges: Mapping[str, Edge]) -> "CycleWalk":
        seq = self.vertex_sequence(graph_edges)
        for i, u in enumerate(seq[:-1]):
            if u == v:
                return CycleWalk(v, self.steps[i:] + self.steps[:i])
        raise ValueError(f"vertex {v!r} not on cycle")

    def reversed_(self) -> "CycleWalk":
        steps = tuple((eid, -d) for eid, d in reversed(self.steps))
        return CycleWalk(self.start, steps)


@dataclass(frozen=True)
class CycleSystem:
    tree_edges: tuple[str, ...]
    chords: tuple[str, ...]
    cycles: tuple[CycleWalk, ...]   # one fundamental cycle per chord


def cycle_system(vertices: Sequence[str], edges: Sequence[Edge]) -> CycleSystem:
    """Spanning forest plus one fundamental cycle per chord.

    Deterministic: edges are considered in sorted id order, so the forest is
    the lexicographically smallest one; each cycle starts at the chord.
    """
    edges_by_id = {e.id: e for e in edges}
    parent: dict[str, str] = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    tree: list[str] = []
    chords: list[str] = []
    tree_adj: dict[str, list[Edge]] = {v: [] for v in vertices}
    for e in sorted(edges, key=lambda e: e.id):
        ro, rt = find(e.origin), find(e.terminus)
        if ro == rt:
            chords.append(e.id)
        else:
            parent[ro] = rt
            tree.append(e.id)
            tree_adj[e.origin].append(e)
            tree_adj[e.terminus].append(e)

    def tree_path(a: str, b: str) -> list[tuple[str, int]]:
        """Oriented steps from a to b along forest edges (BFS, unique path)."""
        if a == b:
            return []
        prev: dict[str, tuple[str, Edge]] = {}
        seen = {a}
        frontier = [a]
        while frontier:
            nxt = []
            for u in frontier:
                for e in tree_adj[u]:
                    w = e.terminus if e.origin == u else e.origin
                    if w not in seen:
                        seen.add(w)
                        prev[w] = (u, e)
                        nxt.append(w)
            if b in seen:
                break
            frontier = nxt
        steps = []
        v = b
        while v != a:
            u, e = prev[v]
            steps.append((e.id, 1 if (e.origin == u and e.terminus == v) else -1))
            v = u
        steps.reverse()
        return steps

    cycles = []
    for cid in sorted(chords):
        e = edges_by_id[cid]
        steps = [(e.id, 1)] + tree_path(e.terminus, e.origin)
        cycles.append(CycleWalk(e.origin, tuple(steps)))
    return CycleSystem(tuple(sorted(tree)), tuple(sorted(chords)), tuple(cycles))


# ---------------------------------------------------------------------------
# Simple cycle enumeration (multigraph-aware)


def simple_cycles(vertices: Sequence[str], edges: Sequence[Edge],
                  budget: int = 10 ** 6) -> list[CycleWalk]:
    """All simple cycles, each once up to rotation and reversal.

    Loops are one-edge cycles; a pair of parallel edges is a two-edge cycle.
    A simple cycle visits each of its vertices once, so it is determined by
    its edge set; enumeration deduplicates on that.  Raises
    CycleBudgetExceeded above `budget` cycles.
    """
    order = {v: i for i, v in enumerate(sorted(vertices))}
    adj: dict[str, list[tuple[Edge, str]]] = {v: [] for v in vertices}
    for e in edges:
        adj[e.origin].append((e, e.terminus))
        if not e.is_loop:
            adj[e.terminus].append((e, e.origin))

    found: dict[frozenset, CycleWalk] = {}

    def record(start: str, steps: list[tuple[str, int]]):
        key = frozenset(eid for eid, _ in steps)
        if key not in found:
            found[key] = CycleWalk(start, tuple(steps))
            if len(found) > budget:
                raise CycleBudgetExceeded(
                    f"simple-cycle enumeration exceeded budget of {budget}")

    for s in sorted(vertices, key=order.get):
        # DFS over paths from s through vertices strictly above s.
        def dfs(v: str, steps: list[tuple[str, int]], onpath: set[str],
                used: set[str]):
            for e, w in adj[v]:
                if e.id in used:
                    continue
                d = 1 if e.origin == v else -1
                if e.is_loop:
                    if v == s and not steps:
                        record(s, [(e.id, 1)])
                    continue
                if w == s:
                    if steps:
                        record(s, steps + [(e.id, d)])
                    continue
                if w in onpath or order[w] < order[s]:
                    continue
                onpath.add(w)
                used.add(e.id)
                dfs(w, steps + [(e.id, d)], onpath, used)
                used.discard(e.id)
                onpath.discard(w)

        dfs(s, [], {s}, set())
    # Two-edge "cycles" from traversing one edge back and forth are impossible
    # here because each edge id is used at most once per path.
    return [found[k] for k in sorted(found, key=lambda k: tuple(sorted(k)))]

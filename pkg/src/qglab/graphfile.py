"""Line-oriented graph file format (.qg).

    # comment
    unit   <token> <decimal approximation>
    vertex <id>
    edge   <id> <from> <to> <p>/<q> <unit>

Units and vertices must be declared before use; coefficients are accepted in
any rational form (``3``, ``3/2``, ``6/4``) and normalized on load.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .graphs import Edge, ExactLength, MetricGraph, UnitTable, validate


class GraphFileError(ValueError):
    def __init__(self, errors: list[str]):
        self.errors = errors
        super().__init__("; ".join(errors))


def parse_graph_text(text: str, source: str = "<string>") -> MetricGraph:
    units: list[tuple[str, float]] = []
    vertices: list[str] = []
    edges: list[Edge] = []
    errors: list[str] = []

    def err(lineno, msg):
        errors.append(f"{source}:{lineno}: {msg}")

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kw = parts[0]
        if kw == "unit":
            if len(parts) != 3:
                err(lineno, "expected: unit <token> <approx>")
                continue
            tok = parts[1]
            if any(t == tok for t, _ in units):
                err(lineno, f"duplicate unit {tok!r}")
                continue
            try:
                approx = float(parts[2])
            except ValueError:
                err(lineno, f"bad unit approximation {parts[2]!r}")
                continue
            if approx <= 0:
                err(lineno, f"unit approximation must be positive: {parts[2]}")
                continue
            units.append((tok, approx))
        elif kw == "vertex":
            if len(parts) != 2:
                err(lineno, "expected: vertex <id>")
                continue
            if parts[1] in vertices:
                err(lineno, f"duplicate vertex {parts[1]!r}")
                continue
            vertices.append(parts[1])
        elif kw == "edge":
            if len(parts) != 6:
                err(lineno, "expected: edge <id> <from> <to> <p>/<q> <unit>")
                continue
            eid, vfrom, vto, coeff_s, unit = parts[1:]
            if any(e.id == eid for e in edges):
                err(lineno, f"duplicate edge {eid!r}")
                continue
            for v in (vfrom, vto):
                if v not in vertices:
                    err(lineno, f"undeclared vertex {v!r}")
            if not any(t == unit for t, _ in units):
                err(lineno, f"undeclared unit {unit!r}")
                continue
            try:
                coeff = Fraction(coeff_s)
            except (ValueError, ZeroDivisionError):
                err(lineno, f"bad coefficient {coeff_s!r}")
                continue
            if coeff <= 0:
                err(lineno, f"coefficient must be positive: {coeff_s}")
                continue
            edges.append(Edge(eid, vfrom, vto, ExactLength(coeff, unit)))
        else:
            err(lineno, f"unknown directive {kw!r}")
    if errors:
        raise GraphFileError(errors)
    graph = MetricGraph.build(vertices, edges, UnitTable(tuple(units)))
    violations = validate(graph)
    if violations:
        raise GraphFileError([f"{source}: {v}" for v in violations])
    return graph


def parse_graph(path: str | Path) -> MetricGraph:
    p = Path(path)
    return parse_graph_text(p.read_text(), source=str(p))


def serialize_graph(graph: MetricGraph) -> str:
    lines = []
    for tok, approx in graph.units.entries:
        lines.append(f"unit {tok} {approx!r}")
    for v in graph.vertices:
        lines.append(f"vertex {v}")
    for e in graph.edges:
        c = e.length.coeff
        lines.append(f"edge {e.id} {e.origin} {e.terminus} "
                     f"{c.numerator}/{c.denominator} {e.length.unit}")
    return "\n".join(lines) + "\n"

"""Combinatorial curvature of tessellation vertices.

curvature(v) = 1 - deg(v)/2 + sum over faces at v of 1/|face|, evaluated in
exact rational arithmetic.  Only interior vertices have a complete face fan,
so curvature is only defined there.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction

from .graph import Graph, GraphError


def vertex_curvature(g: Graph, v: int) -> Fraction:
    """Exact curvature at an interior vertex of a graph with face data."""
    if g.faces is None:
        raise GraphError("curvature needs face data")
    if not g.is_interior(v):
        raise GraphError(f"curvature undefined at non-interior vertex {v}")
    at_v = g.vertex_faces(v)
    if len(at_v) != g.degree(v):
        raise GraphError(f"vertex {v} has {len(at_v)} faces but degree {g.degree(v)}")
    total = Fraction(0)
    for f in at_v:
        total += Fraction(1, len(g.faces[f]))
    return 1 - Fraction(g.degree(v), 2) + total


def curvature_outside(g: Graph, excluded=()) -> Fraction:
    """Largest curvature over interior vertices outside the excluded set."""
    excluded = set(excluded)
    best = None
    for v in range(g.vertex_count):
        if g.is_interior(v) and v not in excluded:
            value = vertex_curvature(g, v)
            if best is None or value > best:
                best = value
    if best is None:
        raise GraphError("no interior vertex outside the excluded set")
    return best


@dataclass(frozen=True)
class CurvatureReport:
    rows: tuple[tuple[int, int, Fraction], ...]  # (vertex, degree, curvature)
    maximum: Fraction


def curvature_report(g: Graph, excluded=()) -> CurvatureReport:
    excluded = set(excluded)
    rows = []
    best = None
    for v in range(g.vertex_count):
        if g.is_interior(v) and v not in excluded:
            value = vertex_curvature(g, v)
            rows.append((v, g.degree(v), value))
            if best is None or value > best:
                best = value
    if best is None:
        raise GraphError("no interior vertex outside the excluded set")
    return CurvatureReport(rows=tuple(rows), maximum=best)


def write_curvature_csv(report: CurvatureReport, fh) -> None:
    writer = csv.writer(fh)
    writer.writerow(["vertex", "degree", "curvature", "curvature_float"])
    for v, deg, value in report.rows:
        writer.writerow([v, deg, str(value), f"{float(value):.17g}"])

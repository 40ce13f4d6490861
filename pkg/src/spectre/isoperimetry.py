"""Cheeger constants, isoperimetric inequalities and face counting.

The Cheeger constant relative to an excluded set K is the infimum of
|edge boundary of W| / (degree area of W) over finite subsets W of the
complement of K.  The minimum is always attained on a connected W, which is
what the exact enumeration exploits.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .graph import Graph, GraphError, VertexSet


@dataclass(frozen=True)
class CheegerEstimate:
    """One-sided or exact Cheeger information.

    ``lower`` and ``upper`` bracket the constant; ``witness`` realizes the
    upper bound.  ``heuristic`` marks lower bounds whose hypotheses could not
    be checked beyond the truncation rim.
    """

    lower: Fraction | None
    upper: Fraction | None
    witness: VertexSet | None
    method: str
    heuristic: bool = False


def cheeger_exact(g: Graph, excluded=(), max_size=None) -> CheegerEstimate:
    """Minimize the boundary ratio over connected interior sets outside K.

    Always yields a certified upper bound (the witness ratio).  When the
    enumeration covered every subset of the complement, i.e. max_size was
    not limiting and no non-interior vertex had to be skipped, the value is
    the Cheeger constant itself and lower == upper.
    """
    excluded = set(excluded)
    allowed = np.zeros(g.vertex_count, dtype=np.uint8)
    skipped_rim = False
    count = 0
    for v in range(g.vertex_count):
        if v in excluded:
            continue
        if not g.is_interior(v):
            skipped_rim = True
            continue
        allowed[v] = 1
        count += 1
    if count == 0:
        raise GraphError("no interior vertex outside the excluded set")
    if max_size is None:
        if count > 24:
            raise GraphError(
                f"{count} candidate vertices is too many for exhaustive "
                "enumeration; pass max_size"
            )
        max_size = count
    indptr, indices = g.csr()
    found = kernels.min_ratio_connected(indptr, indices, allowed, max_size)
    boundary, area, members = found
    exhaustive = (not skipped_rim) and max_size >= count
    ratio = Fraction(boundary, area)
    return CheegerEstimate(
        lower=ratio if exhaustive else None,
        upper=ratio,
        witness=g.vertex_set(members),
        method="enumeration",
    )


def cheeger_lower_forward_surplus(g: Graph, ball_index: int) -> CheegerEstimate:
    """Lower bound from layer structure: min of (forward - back)/degree.

    Any finite W beyond the ball satisfies |boundary| >= sum over W of
    (forward degree - back degree), so the normalized minimum over the
    vertices beyond the ball bounds the Cheeger constant from below
    (clamped at 0).  Only interior vertices can be inspected; if the
    truncation hides any candidate the bound is flagged heuristic.
    """
    g._require_labels()
    best = None
    skipped_rim = False
    for v in range(g.vertex_count):
        if g.generation[v] <= ball_index:
            continue
        if not g.is_interior(v):
            skipped_rim = True
            continue
        back, forward = g.back_forward_degrees(v)
        value = Fraction(forward - back, g.degree(v))
        if best is None or value < best:
            best = value
    if best is None:
        raise GraphError(f"no interior vertex beyond layer {ball_index}")
    return CheegerEstimate(
        lower=max(best, Fraction(0)),
        upper=None,
        witness=None,
        method="forward-surplus",
        heuristic=skipped_rim,
    )


def cheeger_lower_tessellation(g: Graph, excluded=()) -> CheegerEstimate:
    """Tessellation bound: 1 - 6/(min interior degree outside K), at least 0.

    Valid for planar tessellation hosts; the 6 comes from Euler counting.
    """
    if g.faces is None:
        raise GraphError("tessellation bound needs face data")
    excluded = set(excluded)
    lowest = None
    skipped_rim = False
    for v in range(g.vertex_count):
        if v in excluded:
            continue
        if not g.is_interior(v):
            skipped_rim = True
            continue
        if lowest is None or g.degree(v) < lowest:
            lowest = g.degree(v)
    if lowest is None:
        raise GraphError("no interior vertex outside the excluded set")
    return CheegerEstimate(
        lower=max(1 - Fraction(6, lowest), Fraction(0)),
        upper=None,
        witness=None,
        method="tessellation-degree",
        heuristic=skipped_rim,
    )


def _check_interior_connected(g: Graph, members) -> frozenset:
    members = frozenset(members)
    if not members:
        raise GraphError("empty set")
    for v in members:
        if not g.is_interior(v):
            raise GraphError(f"vertex {v} is not interior")
    if not g.is_connected_set(members):
        raise GraphError("set is not connected")
    return members


def isoperimetric_check(g: Graph, members) -> tuple[bool, int]:
    """Tessellation isoperimetric inequality for a connected interior set W.

    |boundary edges| >= area - 6 (|W| + C(W) - 2); returns (ok, slack).
    """
    if g.faces is None:
        raise GraphError("isoperimetric inequality needs face data")
    members = _check_interior_connected(g, members)
    boundary = len(g.edge_boundary(members))
    area = g.area(members)
    comps = g.complement_components(members)
    slack = boundary - (area - 6 * (len(members) + comps - 2))
    return (slack >= 0, slack)


@dataclass(frozen=True)
class FaceSumCheck:
    ok: bool
    lhs: Fraction
    rhs: Fraction
    boundary_faces: int
    boundary_edges: int
    face_bound_ok: bool


def face_sum_check(g: Graph, members) -> FaceSumCheck:
    """Face-sum identity for a connected interior set W.

    sum over v in W, f at v of 1/|f|  ==  F_W - C(W) + sum over boundary
    faces of |f ∩ W|/|f|, where F_W = 2 - |W| + |E_W| by Euler and a
    boundary face is one containing a boundary edge.  Also checks that there
    are at most as many boundary faces as boundary edges.
    """
    if g.faces is None:
        raise GraphError("face-sum identity needs face data")
    members = _check_interior_connected(g, members)
    lhs = Fraction(0)
    for v in members:
        for f in g.vertex_faces(v):
            lhs += Fraction(1, len(g.faces[f]))
    boundary = g.edge_boundary(members)
    boundary_faces = set()
    for u, v in boundary:
        boundary_faces.update(g.edge_faces(u, v))
    euler_faces = 2 - len(members) + g.induced_edge_count(members)
    comps = g.complement_components(members)
    rhs = Fraction(euler_faces - comps)
    for f in boundary_faces:
        in_w = sum(1 for u in g.faces[f] if u in members)
        rhs += Fraction(in_w, len(g.faces[f]))
    return FaceSumCheck(
        ok=lhs == rhs,
        lhs=lhs,
        rhs=rhs,
        boundary_faces=len(boundary_faces),
        boundary_edges=len(boundary),
        face_bound_ok=len(boundary_faces) <= len(boundary),
    )

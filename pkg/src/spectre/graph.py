"""Finite graphs with optional planar faces, layer labels and interior flags.

A Graph here is always a finite object, but it usually stands for a finite
truncation of an infinite host.  The ``interior`` flags record which vertices
carry their true host degree; everything downstream (Dirichlet restrictions,
curvature, Cheeger bounds) only trusts interior vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from collections import deque
import json

import numpy as np


class GraphError(ValueError):
    """Raised for malformed graph data or out-of-contract queries."""


@dataclass(frozen=True)
class VertexSet:
    """A finite vertex set together with its cached boundary statistics.

    ``area`` is the degree sum over the set, ``boundary_edges`` the number of
    host edges leaving it, and ``complement_components`` the number of
    connected components of the complement, where every component touching a
    non-interior vertex is merged into a single unbounded component.
    """

    members: frozenset[int]
    boundary_edges: int
    area: int
    complement_components: int

    def __len__(self) -> int:
        return len(self.members)

    def boundary_ratio(self) -> Fraction:
        """|edge boundary| / area as an exact rational."""
        if self.area == 0:
            raise GraphError("boundary ratio undefined for area 0")
        return Fraction(self.boundary_edges, self.area)


class Graph:
    """Simple undirected graph with sorted adjacency lists.

    Optional structure carried along:

    * ``faces``: tuples of vertex cycles (planar tessellation patches),
    * ``generation``: integer layer label per vertex (BFS layers or the
      generation index of a branching construction),
    * ``interior``: per-vertex flag, False on truncation boundaries,
    * ``clique_blocks``: (start, stop) vertex ranges known to induce complete
      subgraphs, used by the matrix-free operator kernels.
    """

    __slots__ = (
        "adjacency",
        "faces",
        "generation",
        "interior",
        "clique_blocks",
        "_csr",
        "_vertex_faces",
        "_edge_faces",
    )

    def __init__(
        self,
        adjacency,
        faces=None,
        generation=None,
        interior=None,
        clique_blocks=None,
        check: bool = True,
    ):
        self.adjacency = tuple(tuple(sorted(row)) for row in adjacency)
        n = len(self.adjacency)
        self.faces = None if faces is None else tuple(tuple(f) for f in faces)
        self.generation = None if generation is None else tuple(int(g) for g in generation)
        if interior is None:
            self.interior = (True,) * n
        else:
            self.interior = tuple(bool(b) for b in interior)
        self.clique_blocks = (
            None if clique_blocks is None else tuple((int(a), int(b)) for a, b in clique_blocks)
        )
        self._csr = None
        self._vertex_faces = None
        self._edge_faces = None
        if check:
            self.validate()

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges, **kwargs) -> "Graph":
        """Build from an edge list over vertices 0..n-1."""
        adjacency = [[] for _ in range(n)]
        for u, v in edges:
            adjacency[u].append(v)
            adjacency[v].append(u)
        return cls(adjacency, **kwargs)

    # -- validation -----------------------------------------------------------

    def validate(self) -> None:
        """Check the structural invariants; raise GraphError on violation."""
        n = self.vertex_count
        for v, row in enumerate(self.adjacency):
            if n > 1 and not row:
                raise GraphError(f"vertex {v} has degree 0")
            last = -1
            for u in row:
                if not 0 <= u < n:
                    raise GraphError(f"vertex {v}: neighbour {u} out of range")
                if u == v:
                    raise GraphError(f"vertex {v} has a loop")
                if u == last:
                    raise GraphError(f"vertex {v}: duplicate edge to {u}")
                last = u
        for v, row in enumerate(self.adjacency):
            for u in row:
                if not self._has_edge(u, v):
                    raise GraphError(f"edge ({v},{u}) not symmetric")
        if self.generation is not None and len(self.generation) != n:
            raise GraphError("generation label count does not match vertex count")
        if len(self.interior) != n:
            raise GraphError("interior flag count does not match vertex count")
        if self.faces is not None:
            for i, face in enumerate(self.faces):
                if len(face) < 3:
                    raise GraphError(f"face {i} has fewer than 3 vertices")
                if len(set(face)) != len(face):
                    raise GraphError(f"face {i} repeats a vertex")
                for a, b in zip(face, face[1:] + face[:1]):
                    if not 0 <= a < n or not self._has_edge(a, b):
                        raise GraphError(f"face {i}: ({a},{b}) is not an edge")
        if self.clique_blocks is not None:
            for a, b in self.clique_blocks:
                if not (0 <= a < b <= n):
                    raise GraphError(f"clique block ({a},{b}) out of range")

    def _has_edge(self, u: int, v: int) -> bool:
        row = self.adjacency[u]
        lo, hi = 0, len(row)
        while lo < hi:
            mid = (lo + hi) // 2
            if row[mid] < v:
                lo = mid + 1
            else:
                hi = mid
        return lo < len(row) and row[lo] == v

    # -- basic accessors --------------------------------------------------------

    @property
    def vertex_count(self) -> int:
        return len(self.adjacency)

    @property
    def edge_count(self) -> int:
        return sum(len(row) for row in self.adjacency) // 2

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def neighbors(self, v: int):
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        return self._has_edge(u, v)

    def edges(self):
        """Iterate each undirected edge once, as (u, v) with u < v."""
        for u, row in enumerate(self.adjacency):
            for v in row:
                if u < v:
                    yield (u, v)

    def is_interior(self, v: int) -> bool:
        return self.interior[v]

    def interior_vertices(self) -> list[int]:
        return [v for v in range(self.vertex_count) if self.interior[v]]

    def csr(self):
        """(indptr, indices) int64 arrays of the full adjacency."""
        if self._csr is None:
            degrees = np.fromiter(
                (len(row) for row in self.adjacency), dtype=np.int64, count=self.vertex_count
            )
            indptr = np.zeros(self.vertex_count + 1, dtype=np.int64)
            np.cumsum(degrees, out=indptr[1:])
            indices = np.fromiter(
                (u for row in self.adjacency for u in row), dtype=np.int64, count=int(indptr[-1])
            )
            self._csr = (indptr, indices)
        return self._csr

    def degree_array(self) -> np.ndarray:
        indptr, _ = self.csr()
        return np.diff(indptr)

    # -- faces ------------------------------------------------------------------

    def vertex_faces(self, v: int) -> tuple[int, ...]:
        """Indices of tracked faces containing v."""
        if self.faces is None:
            raise GraphError("graph has no face data")
        if self._vertex_faces is None:
            table = [[] for _ in range(self.vertex_count)]
            for i, face in enumerate(self.faces):
                for u in face:
                    table[u].append(i)
            self._vertex_faces = tuple(tuple(t) for t in table)
        return self._vertex_faces[v]

    def edge_faces(self, u: int, v: int) -> tuple[int, ...]:
        """Indices of tracked faces containing the edge (u, v)."""
        if self.faces is None:
            raise GraphError("graph has no face data")
        if self._edge_faces is None:
            table = {}
            for i, face in enumerate(self.faces):
                for a, b in zip(face, face[1:] + face[:1]):
                    key = (a, b) if a < b else (b, a)
                    table.setdefault(key, []).append(i)
            self._edge_faces = {k: tuple(t) for k, t in table.items()}
        key = (u, v) if u < v else (v, u)
        return self._edge_faces.get(key, ())

    # -- set statistics -----------------------------------------------------------

    def edge_boundary(self, members) -> list[tuple[int, int]]:
        """Host edges with exactly one endpoint in the set."""
        inside = set(members)
        out = []
        for u in inside:
            for v in self.adjacency[u]:
                if v not in inside:
                    out.append((u, v))
        return out

    def area(self, members) -> int:
        """Degree sum over the set (the vertex measure used throughout)."""
        return sum(len(self.adjacency[u]) for u in members)

    def induced_edge_count(self, members) -> int:
        inside = set(members)
        return sum(1 for u in inside for v in self.adjacency[u] if v in inside) // 2

    def complement_components(self, members) -> int:
        """Components of the complement, truncation boundary merged into one.

        Components containing any non-interior vertex would all be joined
        through the unseen part of the host, so they count once.
        """
        inside = set(members)
        seen = set(inside)
        bounded = 0
        touches_rim = 0
        for start in range(self.vertex_count):
            if start in seen:
                continue
            rim = False
            queue = deque([start])
            seen.add(start)
            while queue:
                u = queue.popleft()
                if not self.interior[u]:
                    rim = True
                for v in self.adjacency[u]:
                    if v not in seen:
                        seen.add(v)
                        queue.append(v)
            if rim:
                touches_rim = 1
            else:
                bounded += 1
        return bounded + touches_rim

    def vertex_set(self, members) -> VertexSet:
        members = frozenset(members)
        for v in members:
            if not 0 <= v < self.vertex_count:
                raise GraphError(f"vertex {v} out of range")
        return VertexSet(
            members=members,
            boundary_edges=len(self.edge_boundary(members)),
            area=self.area(members),
            complement_components=self.complement_components(members),
        )

    def is_connected_set(self, members) -> bool:
        members = set(members)
        if not members:
            return True
        start = next(iter(members))
        seen = {start}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in self.adjacency[u]:
                if v in members and v not in seen:
                    seen.add(v)
                    queue.append(v)
        return len(seen) == len(members)

    # -- balls, shells, layers ------------------------------------------------------

    def ball(self, center: int, radius: int) -> VertexSet:
        """All vertices at BFS distance <= radius from the center."""
        if not 0 <= center < self.vertex_count:
            raise GraphError(f"center {center} out of range")
        if radius < 0:
            raise GraphError("radius must be nonnegative")
        dist = {center: 0}
        queue = deque([center])
        while queue:
            u = queue.popleft()
            if dist[u] == radius:
                continue
            for v in self.adjacency[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        return self.vertex_set(dist.keys())

    def _require_labels(self) -> None:
        if self.generation is None:
            raise GraphError("graph carries no layer labels")

    def shell(self, index: int) -> VertexSet:
        """Vertices whose layer label equals index."""
        self._require_labels()
        members = [v for v, g in enumerate(self.generation) if g == index]
        if not members:
            raise GraphError(f"layer {index} is empty")
        return self.vertex_set(members)

    def generation_ball(self, index: int) -> VertexSet:
        """Vertices whose layer label is <= index."""
        self._require_labels()
        members = [v for v, g in enumerate(self.generation) if g <= index]
        if not members:
            raise GraphError(f"no layer label is <= {index}")
        return self.vertex_set(members)

    def layer_range(self) -> tuple[int, int]:
        self._require_labels()
        return (min(self.generation), max(self.generation))

    def max_interior_label(self) -> int:
        """Largest layer label whose vertices are all interior."""
        self._require_labels()
        worst = {}
        for v, g in enumerate(self.generation):
            worst[g] = min(worst.get(g, True), self.interior[v])
        good = [g for g, ok in worst.items() if ok]
        if not good:
            raise GraphError("no fully interior layer")
        # labels above the first broken layer do not count
        limit = min((g for g, ok in worst.items() if not ok), default=None)
        if limit is None:
            return max(good)
        best = max((g for g in good if g < limit), default=None)
        if best is None:
            raise GraphError("no fully interior layer below the truncation rim")
        return best

    def back_forward_degrees(self, v: int) -> tuple[int, int]:
        """(neighbours one layer down, neighbours one layer up) for v."""
        self._require_labels()
        g = self.generation[v]
        back = sum(1 for u in self.adjacency[v] if self.generation[u] == g - 1)
        forward = sum(1 for u in self.adjacency[v] if self.generation[u] == g + 1)
        return (back, forward)

    def interior_degree_range(self, excluded=()) -> tuple[int, int]:
        """(min, max) degree over interior vertices outside the excluded set."""
        excluded = set(excluded)
        degs = [
            len(self.adjacency[v])
            for v in range(self.vertex_count)
            if self.interior[v] and v not in excluded
        ]
        if not degs:
            raise GraphError("no interior vertex outside the excluded set")
        return (min(degs), max(degs))


# -- JSON interchange -----------------------------------------------------------

_KNOWN_KEYS = {"n", "edges", "faces", "generation", "interior"}


def graph_to_dict(g: Graph) -> dict:
    out = {"n": g.vertex_count, "edges": [[u, v] for u, v in g.edges()]}
    if g.faces is not None:
        out["faces"] = [list(f) for f in g.faces]
    if g.generation is not None:
        out["generation"] = list(g.generation)
    if not all(g.interior):
        out["interior"] = [1 if b else 0 for b in g.interior]
    return out


def graph_from_dict(data) -> Graph:
    if not isinstance(data, dict):
        raise GraphError("top level: expected an object")
    unknown = set(data) - _KNOWN_KEYS
    if unknown:
        raise GraphError(f"unknown keys: {sorted(unknown)}")
    if "n" not in data or not isinstance(data["n"], int) or data["n"] < 1:
        raise GraphError("'n' must be a positive integer")
    n = data["n"]
    if "edges" not in data or not isinstance(data["edges"], list):
        raise GraphError("'edges' must be a list")
    seen = set()
    edges = []
    for i, e in enumerate(data["edges"]):
        if (
            not isinstance(e, list)
            or len(e) != 2
            or not all(isinstance(x, int) for x in e)
        ):
            raise GraphError(f"edges[{i}]: expected a pair of integers, got {e!r}")
        u, v = e
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edges[{i}]: endpoint out of range in {e!r}")
        if u == v:
            raise GraphError(f"edges[{i}]: loop at vertex {u}")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise GraphError(f"edges[{i}]: duplicate edge {list(key)!r}")
        seen.add(key)
        edges.append(key)
    faces = data.get("faces")
    if faces is not None:
        if not isinstance(faces, list):
            raise GraphError("'faces' must be a list")
        for i, f in enumerate(faces):
            if not isinstance(f, list) or not all(isinstance(x, int) for x in f):
                raise GraphError(f"faces[{i}]: expected a list of integers")
    generation = data.get("generation")
    if generation is not None:
        if (
            not isinstance(generation, list)
            or len(generation) != n
            or not all(isinstance(x, int) for x in generation)
        ):
            raise GraphError("'generation' must be a list of n integers")
    interior = data.get("interior")
    if interior is not None:
        if (
            not isinstance(interior, list)
            or len(interior) != n
            or not all(x in (0, 1) for x in interior)
        ):
            raise GraphError("'interior' must be a list of n flags (0 or 1)")
    return Graph.from_edges(
        n,
        edges,
        faces=faces,
        generation=generation,
        interior=None if interior is None else [bool(x) for x in interior],
    )


def save_graph(g: Graph, path) -> None:
    with open(path, "w") as fh:
        json.dump(graph_to_dict(g), fh)
        fh.write("\n")


def load_graph(path) -> Graph:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GraphError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    try:
        return graph_from_dict(data)
    except GraphError as exc:
        raise GraphError(f"{path}: {exc}") from exc

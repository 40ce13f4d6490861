"""Graph family generators: complete graphs, branching graphs, trees, patches.

The branching family is parametrized by a rational exponent gamma and a
rational factor c.  Generation sizes follow N_1 = 1, N_2 = max(ceil(c), 2),
N_k = N_{k-1} * ceil(c * N_{k-1}^gamma); each generation induces a complete
graph, the root joins every generation-2 vertex, and each later vertex feeds
a private block of the next generation, so back degrees are exactly 1.

Tessellation patches are finite pieces of the planar {p,q} tessellation
(faces p-gons, q faces around every interior vertex), grown layer by layer
around a seed face.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graph import Graph


class GeneratorError(ValueError):
    """Raised for invalid parameters or builds that would exceed safe size."""


def _rational(value, name: str) -> Fraction:
    if isinstance(value, float):
        raise GeneratorError(
            f"{name}: pass rationals exactly (int, Fraction or 'p/q' string), not float"
        )
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise GeneratorError(f"{name}: not a rational: {value!r}") from exc


@dataclass(frozen=True)
class BranchingParams:
    gamma: Fraction
    c: Fraction
    k_max: int

    def __post_init__(self):
        object.__setattr__(self, "gamma", _rational(self.gamma, "gamma"))
        object.__setattr__(self, "c", _rational(self.c, "c"))
        if self.gamma < 0:
            raise GeneratorError("gamma must be nonnegative")
        if self.c < 1:
            raise GeneratorError("c must be at least 1")
        if not isinstance(self.k_max, int) or self.k_max < 1:
            raise GeneratorError("k_max must be a positive integer")


@dataclass(frozen=True)
class TessellationParams:
    p: int
    q: int
    layers: int

    def __post_init__(self):
        for name in ("p", "q", "layers"):
            if not isinstance(getattr(self, name), int):
                raise GeneratorError(f"{name} must be an integer")
        if self.p < 3 or self.q < 3:
            raise GeneratorError("need p >= 3 and q >= 3")
        if (self.p - 2) * (self.q - 2) < 4:
            raise GeneratorError("(p-2)(q-2) must be at least 4 (no sphere tilings)")
        if self.layers < 0:
            raise GeneratorError("layers must be nonnegative")


def _iroot_ceil(x: int, q: int) -> int:
    """Smallest integer t >= 0 with t**q >= x (x >= 0, q >= 1)."""
    if x <= 0:
        return 0
    if q == 1:
        return x
    lo, hi = 0, 1 << ((x.bit_length() + q - 1) // q + 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**q >= x:
            hi = mid
        else:
            lo = mid + 1
    return lo


def branch_count(params: BranchingParams, size: int) -> int:
    """ceil(c * size**gamma), evaluated in exact integer arithmetic.

    This is the number of forward edges each vertex of a generation of the
    given size sends into the next generation.
    """
    if size < 1:
        raise GeneratorError("size must be positive")
    a, b = params.c.numerator, params.c.denominator
    p, q = params.gamma.numerator, params.gamma.denominator
    t = _iroot_ceil(a**q * size**p, q)
    return -(-t // b)


def generation_sizes(params: BranchingParams) -> list[int]:
    """[N_1, ..., N_{k_max}] as exact integers."""
    sizes = [1]
    if params.k_max >= 2:
        sizes.append(max(branch_count(params, 1), 2))
    while len(sizes) < params.k_max:
        sizes.append(sizes[-1] * branch_count(params, sizes[-1]))
    return sizes


def complete_graph(n: int) -> Graph:
    if n < 1:
        raise GeneratorError("n must be positive")
    ids = list(range(n))
    adjacency = [ids[:i] + ids[i + 1 :] for i in range(n)]
    return Graph(
        adjacency,
        clique_blocks=[(0, n)] if n >= 2 else None,
        check=False,
    )


def branching_graph(
    params: BranchingParams,
    extend_stubs: bool = False,
    max_vertices: int = 5_000_000,
    max_edges: int = 30_000_000,
) -> Graph:
    """Finite truncation of the branching graph, generations 1..k_max.

    A plain build marks the last generation non-interior (its clique is
    present but its forward fan is not).  With extend_stubs=True one extra
    generation is appended carrying only its back edges, which makes every
    real generation interior at the cost of N_{k_max} * b_{k_max} stub
    vertices.
    """
    sizes = generation_sizes(params)
    k_max = params.k_max
    stub_count = 0
    if extend_stubs:
        if k_max == 1:
            stub_count = max(branch_count(params, 1), 2)
        else:
            stub_count = sizes[-1] * branch_count(params, sizes[-1])
    total = sum(sizes) + stub_count
    planned_edges = (
        sum(n * (n - 1) // 2 for n in sizes)
        + (sizes[1] if k_max >= 2 else 0)
        + sum(sizes[k] * branch_count(params, sizes[k]) for k in range(1, k_max - 1))
        + stub_count
    )
    if total > max_vertices or planned_edges > max_edges:
        raise GeneratorError(
            f"refusing to build {total} vertices / {planned_edges} edges "
            f"(limits {max_vertices} / {max_edges})"
        )

    starts = [0]
    for n in sizes:
        starts.append(starts[-1] + n)

    adjacency = [[] for _ in range(total)]
    generation = []
    for k, n in enumerate(sizes, start=1):
        generation.extend([k] * n)
    generation.extend([k_max + 1] * stub_count)

    blocks = []
    for k in range(1, k_max):  # generations 2..k_max, 0-based index k
        s, n = starts[k], sizes[k]
        if n >= 2:
            blocks.append((s, s + n))
        ids = list(range(s, s + n))
        for i in range(n):
            adjacency[s + i].extend(ids[:i])
            adjacency[s + i].extend(ids[i + 1 :])
    if k_max >= 2:
        for v in range(starts[1], starts[2]):
            adjacency[0].append(v)
            adjacency[v].append(0)
    for k in range(1, k_max - 1):  # forward fans from generation k+1 (0-based k)
        b = branch_count(params, sizes[k])
        s, s_next = starts[k], starts[k + 1]
        for i in range(sizes[k]):
            lo = s_next + i * b
            adjacency[s + i].extend(range(lo, lo + b))
            for w in range(lo, lo + b):
                adjacency[w].append(s + i)
    if stub_count:
        s_stub = starts[-1]
        if k_max == 1:
            for w in range(s_stub, s_stub + stub_count):
                adjacency[0].append(w)
                adjacency[w].append(0)
        else:
            b = branch_count(params, sizes[-1])
            s = starts[k_max - 1]
            for i in range(sizes[-1]):
                lo = s_stub + i * b
                adjacency[s + i].extend(range(lo, lo + b))
                for w in range(lo, lo + b):
                    adjacency[w].append(s + i)

    if extend_stubs:
        interior = [True] * (total - stub_count) + [False] * stub_count
    else:
        interior = [True] * total
        for v in range(starts[k_max - 1], starts[k_max]):
            interior[v] = False
        if k_max == 1:
            interior[0] = False

    return Graph(
        adjacency,
        generation=generation,
        interior=interior,
        clique_blocks=blocks or None,
        check=False,
    )


def regular_tree(branching: int, depth: int) -> Graph:
    """Rooted tree, root with `branching` children, every inner node likewise.

    Levels are labelled 0..depth; the deepest level is non-interior (an
    infinite regular tree would continue below it).
    """
    if branching < 1:
        raise GeneratorError("branching must be positive")
    if depth < 0:
        raise GeneratorError("depth must be nonnegative")
    level_sizes = [branching**k for k in range(depth + 1)]
    total = sum(level_sizes)
    starts = [0]
    for n in level_sizes:
        starts.append(starts[-1] + n)
    adjacency = [[] for _ in range(total)]
    generation = []
    for k, n in enumerate(level_sizes):
        generation.extend([k] * n)
    for k in range(depth):
        for i in range(level_sizes[k]):
            parent = starts[k] + i
            lo = starts[k + 1] + i * branching
            adjacency[parent].extend(range(lo, lo + branching))
            for w in range(lo, lo + branching):
                adjacency[w].append(parent)
    interior = [generation[v] < depth for v in range(total)]
    return Graph(adjacency, generation=generation, interior=interior, check=False)


def tessellation_patch(params: TessellationParams) -> Graph:
    """Patch of the {p,q} tessellation: a seed p-gon plus `layers` passes.

    Each pass walks the boundary cycle once and completes the face fan of
    every boundary vertex to q faces: an anchor face is laid over the wrap
    edge first, then each vertex receives fan faces sharing new spoke
    vertices, and a closing face reaches the next boundary vertex.  A
    successor whose fan the closing face would finish is absorbed into that
    face (this is what stitches seams for q = 3 and q = 4).  Vertices are
    labelled with the pass that created them; a vertex is interior once it
    has all q faces.
    """
    p, q, layers = params.p, params.q, params.layers
    adjacency: list[list[int]] = []
    face_count: list[int] = []
    layer_of: list[int] = []
    faces: list[tuple[int, ...]] = []
    edge_set: set[tuple[int, int]] = set()

    def new_vertex(layer: int) -> int:
        adjacency.append([])
        face_count.append(0)
        layer_of.append(layer)
        return len(adjacency) - 1

    def add_face(cycle: list[int]) -> None:
        if len(cycle) != p:
            raise GeneratorError(f"internal: face of size {len(cycle)}, expected {p}")
        faces.append(tuple(cycle))
        for i, v in enumerate(cycle):
            face_count[v] += 1
            if face_count[v] > q:
                raise GeneratorError(f"internal: vertex {v} oversaturated")
            u = cycle[(i + 1) % p]
            key = (v, u) if v < u else (u, v)
            if key not in edge_set:
                edge_set.add(key)
                adjacency[v].append(u)
                adjacency[u].append(v)

    seed = [new_vertex(0) for _ in range(p)]
    add_face(seed)
    boundary = list(seed)

    for layer in range(1, layers + 1):
        m = len(boundary)
        ring: list[int] = []
        anchor = [new_vertex(layer) for _ in range(p - 2)]
        add_face([boundary[0]] + anchor + [boundary[-1]])
        attach = anchor[0]
        final_attach = anchor[-1]
        ring.extend(reversed(anchor))

        for i in range(m):
            v = boundary[i]
            if face_count[v] == q:
                continue  # absorbed by a predecessor's closing face
            missing = q - face_count[v]
            for _ in range(missing - 1):
                mids = [new_vertex(layer) for _ in range(p - 3)]
                tip = new_vertex(layer)
                add_face([v, attach] + mids + [tip])
                ring.extend(mids)
                ring.append(tip)
                attach = tip
            consumed: list[int] = []
            if i == m - 1:
                endpoint = final_attach
            else:
                j = i + 1
                while True:
                    w = boundary[j]
                    if face_count[w] + 1 == q:
                        consumed.append(w)
                        j += 1
                        if j == m:
                            endpoint = final_attach
                            break
                    else:
                        endpoint = w
                        break
            spare = p - 3 - len(consumed)
            if spare < 0:
                raise GeneratorError("internal: closing face cannot absorb the seam")
            mids = [new_vertex(layer) for _ in range(spare)]
            add_face([v, attach] + mids + [endpoint] + list(reversed(consumed)))
            ring.extend(mids)
            if mids:
                attach = mids[-1]

        for v in boundary:
            if face_count[v] != q:
                raise GeneratorError(f"internal: boundary vertex {v} left unsaturated")
        # start the next pass inside a run of single-face vertices, so the
        # next anchor cannot oversaturate its corners (bites for q = 3)
        for s in range(len(ring)):
            if face_count[ring[s]] == 1 and face_count[ring[s - 1]] == 1:
                ring = ring[s:] + ring[:s]
                break
        else:
            if q == 3:
                raise GeneratorError("internal: no safe ring rotation")
        boundary = ring

    interior = [face_count[v] == q for v in range(len(adjacency))]
    return Graph(
        adjacency,
        faces=faces,
        generation=layer_of,
        interior=interior,
        check=False,
    )

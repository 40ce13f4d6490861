"""The three Laplacian variants and their Dirichlet restrictions.

Variants, on functions over the retained vertex set:

* ``delta``:        (D - A) restricted, on unweighted l2,
* ``delta_tilde``:  (I - D^-1 A) restricted, self-adjoint on degree-weighted l2,
* ``delta_hat``:    (I - D^-1/2 A D^-1/2) restricted, on unweighted l2.

The Dirichlet restriction by an excluded set K deletes rows and columns but
keeps the full host degree on the diagonal; this is why every retained vertex
must be interior, so its host degree is actually known.  The three variants
share one masked adjacency structure and are related entrywise by conjugation
with D^1/2, which the tests exploit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .graph import Graph, GraphError
from .kernels import AdjacencyStructure

VARIANTS = ("delta", "delta_tilde", "delta_hat")
_WEIGHT_OF = {"delta": "unit", "delta_tilde": "degree", "delta_hat": "unit"}


class OperatorError(ValueError):
    """Raised for out-of-contract operator requests."""


@dataclass(frozen=True)
class FunctionVector:
    """A finitely supported function: values over a sorted vertex tuple."""

    vertices: tuple[int, ...]
    values: np.ndarray
    weight: str = "unit"

    def __post_init__(self):
        if len(self.vertices) != len(self.values):
            raise OperatorError("vertex/value length mismatch")
        if any(a >= b for a, b in zip(self.vertices, self.vertices[1:])):
            raise OperatorError("vertices must be strictly increasing")
        if self.weight not in ("unit", "degree"):
            raise OperatorError(f"unknown weight tag {self.weight!r}")


def indicator(g: Graph, members) -> FunctionVector:
    vertices = tuple(sorted(set(members)))
    return FunctionVector(vertices, np.ones(len(vertices)))


class LaplacianMatrix:
    """One Laplacian variant restricted to the complement of an excluded set."""

    def __init__(self, graph: Graph, variant: str, mask: np.ndarray):
        if variant not in VARIANTS:
            raise OperatorError(f"unknown variant {variant!r}")
        self.graph = graph
        self.variant = variant
        self.weight = _WEIGHT_OF[variant]
        self.mask = mask  # sorted host ids of retained vertices
        self.degrees = np.array([graph.degree(int(v)) for v in mask], dtype=np.int64)
        self._deg_f = self.degrees.astype(np.float64)
        self._dinv_sqrt = 1.0 / np.sqrt(self._deg_f)
        self.struct = _masked_structure(graph, mask)

    # -- construction ----------------------------------------------------------

    @property
    def dimension(self) -> int:
        return len(self.mask)

    def with_variant(self, variant: str) -> "LaplacianMatrix":
        """Same mask and adjacency structure, different variant."""
        other = object.__new__(LaplacianMatrix)
        other.graph = self.graph
        other.variant = variant
        other.weight = _WEIGHT_OF[variant]
        other.mask = self.mask
        other.degrees = self.degrees
        other._deg_f = self._deg_f
        other._dinv_sqrt = self._dinv_sqrt
        other.struct = self.struct
        if variant not in VARIANTS:
            raise OperatorError(f"unknown variant {variant!r}")
        return other

    # -- application -------------------------------------------------------------

    def adjacency_apply(self, x: np.ndarray) -> np.ndarray:
        return kernels.adj_matvec(self.struct, x)

    def apply(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.dimension,):
            raise OperatorError("vector length does not match the mask")
        if self.variant == "delta":
            return self._deg_f * x - self.adjacency_apply(x)
        if self.variant == "delta_hat":
            return x - self._dinv_sqrt * self.adjacency_apply(self._dinv_sqrt * x)
        return x - self.adjacency_apply(x) / self._deg_f

    def apply_int(self, x) -> list:
        """Exact integer image, delta variant only (its entries are integers)."""
        if self.variant != "delta":
            raise OperatorError("integer application only makes sense for delta")
        x = list(x)
        st = self.struct
        out = [int(self.degrees[i]) * x[i] for i in range(self.dimension)]
        indptr, indices = st.indptr, st.indices
        for i in range(self.dimension):
            acc = 0
            for j in range(indptr[i], indptr[i + 1]):
                acc += x[indices[j]]
            out[i] -= acc
        for b in range(len(st.block_offsets) - 1):
            mem = st.block_members[st.block_offsets[b] : st.block_offsets[b + 1]]
            s = sum(x[m] for m in mem)
            for m in mem:
                out[m] -= s - x[m]
        return out

    def norm_inf(self) -> float:
        """Exact max absolute row sum, used to shift the Lanczos fallback."""
        ones = np.ones(self.dimension)
        if self.variant == "delta":
            rows = self._deg_f + self.adjacency_apply(ones)
        elif self.variant == "delta_hat":
            rows = 1.0 + self._dinv_sqrt * self.adjacency_apply(self._dinv_sqrt)
        else:
            rows = 1.0 + self.adjacency_apply(ones) / self._deg_f
        return float(rows.max())

    # -- dense forms ------------------------------------------------------------

    def adjacency_dense(self, dtype=np.float64) -> np.ndarray:
        n = self.dimension
        st = self.struct
        A = np.zeros((n, n), dtype=dtype)
        row_ids = np.repeat(np.arange(n), np.diff(st.indptr))
        A[row_ids, st.indices] = 1
        for b in range(len(st.block_offsets) - 1):
            mem = st.block_members[st.block_offsets[b] : st.block_offsets[b + 1]]
            A[np.ix_(mem, mem)] = 1
            A[mem, mem] = 0
        return A

    def dense(self, dtype=np.float64) -> np.ndarray:
        """Entrywise matrix. delta is exact in integer dtypes."""
        if dtype not in (np.float64, float) and self.variant != "delta":
            raise OperatorError("only delta has integer entries")
        A = self.adjacency_dense(dtype=dtype)
        if self.variant == "delta":
            return np.diag(self.degrees.astype(dtype)) - A
        if self.variant == "delta_hat":
            scale = self._dinv_sqrt
            return np.eye(self.dimension) - scale[:, None] * A * scale[None, :]
        return np.eye(self.dimension) - A / self._deg_f[:, None]

    # -- inner products ------------------------------------------------------------

    def weight_vector(self) -> np.ndarray:
        if self.weight == "unit":
            return np.ones(self.dimension)
        return self._deg_f.copy()

    def inner(self, x, y) -> float:
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if self.weight == "unit":
            return float(x @ y)
        return float((self._deg_f * x) @ y)

    def rayleigh(self, x) -> float:
        """<Mx, x>_w / <x, x>_w in the variant's natural inner product."""
        x = np.asarray(x, dtype=np.float64)
        denom = self.inner(x, x)
        if denom == 0.0:
            raise OperatorError("Rayleigh quotient of the zero vector")
        return self.inner(self.apply(x), x) / denom


def _masked_structure(g: Graph, mask: np.ndarray) -> AdjacencyStructure:
    n = g.vertex_count
    pos = np.full(n, -1, dtype=np.int64)
    pos[mask] = np.arange(len(mask), dtype=np.int64)
    block_id = np.full(n, -1, dtype=np.int64)
    block_offsets = [0]
    block_members: list[int] = []
    if g.clique_blocks:
        for a, b in g.clique_blocks:
            inside = [int(pos[v]) for v in range(a, b) if pos[v] >= 0]
            if len(inside) >= 2:
                bid = len(block_offsets) - 1
                for v in range(a, b):
                    if pos[v] >= 0:
                        block_id[v] = bid
                block_members.extend(inside)
                block_offsets.append(len(block_members))
    indptr = [0]
    indices: list[int] = []
    for u in mask:
        u = int(u)
        bu = block_id[u]
        for v in g.neighbors(u):
            pv = pos[v]
            if pv >= 0 and (bu < 0 or block_id[v] != bu):
                indices.append(int(pv))
        indptr.append(len(indices))
    return AdjacencyStructure(
        size=len(mask),
        indptr=np.array(indptr, dtype=np.int64),
        indices=np.array(indices, dtype=np.int64),
        block_offsets=np.array(block_offsets, dtype=np.int64),
        block_members=np.array(block_members, dtype=np.int64),
    )


def assemble(g: Graph, variant: str, excluded=()) -> LaplacianMatrix:
    """Dirichlet restriction to the complement of the excluded set.

    Every retained vertex must be interior: the restriction keeps full host
    degrees on the diagonal, and only interior vertices carry theirs.
    """
    excluded = set(excluded)
    for v in excluded:
        if not 0 <= v < g.vertex_count:
            raise OperatorError(f"excluded vertex {v} out of range")
    mask = [v for v in range(g.vertex_count) if v not in excluded]
    if not mask:
        raise OperatorError("excluded set leaves no vertices")
    for v in mask:
        if not g.is_interior(v):
            raise OperatorError(
                f"vertex {v} is not interior; exclude the truncation rim first"
            )
    return LaplacianMatrix(g, variant, np.array(mask, dtype=np.int64))


def dirichlet_annulus(g: Graph, inner: int, outer: int, variant: str) -> LaplacianMatrix:
    """Restriction to the layers strictly between ball `inner` and `outer`."""
    g._require_labels()
    if inner >= outer:
        raise OperatorError("need inner < outer")
    keep = [v for v, lab in enumerate(g.generation) if inner < lab <= outer]
    if not keep:
        raise OperatorError(f"annulus ({inner}, {outer}] is empty")
    excluded = set(range(g.vertex_count)) - set(keep)
    return assemble(g, variant, excluded)


def quadratic_form(g: Graph, phi: FunctionVector) -> float:
    """<Delta phi, phi> = sum over host edges of (phi(u) - phi(v))^2.

    phi is extended by zero; its support must be interior so that every
    incident host edge is present.  The value equals the Dirichlet form of
    any restriction whose excluded set avoids the support.
    """
    values = {}
    for v, x in zip(phi.vertices, phi.values):
        if not g.is_interior(v):
            raise OperatorError(f"support vertex {v} is not interior")
        values[v] = float(x)
    total = 0.0
    for u, xu in values.items():
        for w in g.neighbors(u):
            if w in values:
                if w > u:
                    d = xu - values[w]
                    total += d * d
            else:
                total += xu * xu
    return total


def weighted_norm_sq(g: Graph, phi: FunctionVector, weight: str = "unit") -> float:
    if weight == "unit":
        return float(phi.values @ phi.values)
    degs = np.array([g.degree(v) for v in phi.vertices], dtype=np.float64)
    return float((degs * phi.values) @ phi.values)


def factorization_check(g: Graph, excluded, values, tol: float = 1e-12):
    """Rayleigh factorization through the normalized variant.

    R_delta(phi) == R_hat(D^(1/2) phi) * (<D phi, phi> / <phi, phi>) on any
    Dirichlet restriction; returns (ok, lhs, rhs).
    """
    delta = assemble(g, "delta", excluded)
    hat = delta.with_variant("delta_hat")
    x = np.asarray(values, dtype=np.float64)
    if x.shape != (delta.dimension,):
        raise OperatorError("values must align with the retained vertex order")
    lhs = delta.rayleigh(x)
    lifted = np.sqrt(delta._deg_f) * x
    rhs = hat.rayleigh(lifted) * float((delta._deg_f * x) @ x) / float(x @ x)
    scale = max(1.0, abs(lhs), abs(rhs))
    return (abs(lhs - rhs) <= tol * scale, lhs, rhs)


def write_coordinate_dump(matrix: LaplacianMatrix, prefix: str) -> None:
    """Text dump: '<prefix>.coo' rows 'i j value', '<prefix>.weights' sidecar.

    Indices are positions in the retained vertex order; the sidecar lists
    'host_vertex weight' per row so the matrix can be tied back to the graph.
    """
    dense = matrix.dense()
    n = matrix.dimension
    with open(prefix + ".coo", "w") as fh:
        for i in range(n):
            for j in range(n):
                if dense[i, j] != 0.0:
                    fh.write(f"{i} {j} {dense[i, j]:.17g}\n")
    weights = matrix.weight_vector()
    with open(prefix + ".weights", "w") as fh:
        for v, w in zip(matrix.mask, weights):
            fh.write(f"{int(v)} {w:.17g}\n")

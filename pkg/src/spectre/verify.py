"""Built-in verification corpus: every check operation on deterministic inputs.

The corpus is fixed (seeded generators, pinned parameters) so that two runs
on any machine produce the same pass/fail report line for line.  Each item
exercises one family of named inequalities or identities; the CLI `verify`
subcommand prints the report and exits nonzero when anything fails.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .curvature import vertex_curvature
from .generators import (
    BranchingParams,
    TessellationParams,
    branching_graph,
    tessellation_patch,
)
from .graph import Graph
from .isoperimetry import cheeger_exact, face_sum_check, isoperimetric_check
from .operators import FunctionVector, assemble, factorization_check
from .spectral import (
    full_spectrum,
    sandwich_check,
    shell_inequality_check,
    spectrum_summary,
    transition_norm_checks,
)
from .sweep import (
    annulus_indicator_quotient,
    bound_report,
    default_schedule,
    gn_theory,
    measured_indicator_quotient,
    sweep,
)

CORPUS_SEED = 0x5EED


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _random_host(rng, n: int) -> Graph:
    """Connected host on n vertices: a random tree plus a few chords."""
    edges = set()
    order = [int(v) for v in rng.permutation(n)]
    for i in range(1, n):
        a, b = order[i], order[int(rng.integers(0, i))]
        edges.add((min(a, b), max(a, b)))
    for _ in range(n):
        a, b = int(rng.integers(0, n)), int(rng.integers(0, n))
        if a != b:
            edges.add((min(a, b), max(a, b)))
    return Graph.from_edges(n, edges)


def _random_interior_subset(g: Graph, rng, exclude=frozenset()):
    """Non-empty connected set of interior vertices avoiding the excluded ones."""
    pool = [v for v in g.interior_vertices() if v not in exclude]
    if not pool:
        return None
    seed = pool[int(rng.integers(0, len(pool)))]
    target = 1 + int(rng.integers(0, max(1, len(pool) // 2)))
    chosen = {seed}
    frontier = [seed]
    while frontier and len(chosen) < target:
        v = frontier.pop(int(rng.integers(0, len(frontier))))
        for u in g.neighbors(v):
            if u not in chosen and g.is_interior(u) and u not in exclude:
                chosen.add(u)
                frontier.append(u)
                if len(chosen) >= target:
                    break
    return sorted(chosen)


def _check_identities() -> list[CheckResult]:
    """Handshake, Cheeger identities and the quadratic-form factorization."""
    rng = np.random.default_rng(CORPUS_SEED)
    bad = []
    for trial in range(25):
        g = _random_host(rng, 3 + int(rng.integers(0, 10)))
        k_vertex = int(rng.integers(0, g.vertex_count))
        members = _random_interior_subset(g, rng, exclude={k_vertex})
        if members is None:
            continue
        area = g.area(members)
        boundary = len(g.edge_boundary(members))
        internal = g.induced_edge_count(members)
        if area != 2 * internal + boundary:
            bad.append(f"handshake trial {trial}")
        matrix = assemble(g, "delta", excluded={k_vertex})
        position = {int(v): i for i, v in enumerate(matrix.mask)}
        chi = [0] * matrix.dimension
        for v in members:
            chi[position[v]] = 1
        image = matrix.apply_int(chi)
        form = sum(a * b for a, b in zip(image, chi))
        if form != boundary:
            bad.append(f"indicator form trial {trial}")
        weighted = sum(g.degree(v) for v in members)
        if weighted != area:
            bad.append(f"degree norm trial {trial}")
        for _ in range(3):
            phi = rng.standard_normal(matrix.dimension)
            ok, lhs, rhs = factorization_check(g, {k_vertex}, phi)
            if not ok:
                bad.append(f"factorization trial {trial}: {lhs} vs {rhs}")
    return [_result("identities/random-hosts", bad)]


def _check_sandwich_and_norm() -> list[CheckResult]:
    """Two-sided spectral sandwich and transition-norm bounds, exact alpha."""
    rng = np.random.default_rng(CORPUS_SEED + 1)
    bad = []
    for trial in range(40):
        g = _random_host(rng, 3 + int(rng.integers(0, 7)))
        k_vertex = int(rng.integers(0, g.vertex_count))
        estimate = cheeger_exact(g, excluded={k_vertex})
        hat = assemble(g, "delta_hat", excluded={k_vertex})
        report = sandwich_check(hat, estimate.lower)
        if not report.ok:
            bad.append(
                f"sandwich trial {trial}: margins {report.margin_low:.2e}, "
                f"{report.margin_high:.2e}"
            )
        norms = transition_norm_checks(g, excluded={k_vertex})
        if not norms.ok:
            bad.append(f"norm trial {trial}: {norms.norm} outside "
                       f"[{norms.lower}, {norms.upper}]")
    return [_result("spectral/sandwich-and-norm", bad)]


def _check_solver_agreement() -> list[CheckResult]:
    """Dense and Lanczos extremes agree; normalized spectra sit inside [0, 2]."""
    rng = np.random.default_rng(CORPUS_SEED + 2)
    bad = []
    for trial in range(12):
        g = _random_host(rng, 6 + int(rng.integers(0, 20)))
        k_vertex = int(rng.integers(0, g.vertex_count))
        for variant in ("delta", "delta_hat"):
            matrix = assemble(g, variant, excluded={k_vertex})
            values = full_spectrum(matrix)
            iterative = spectrum_summary(matrix, dense_threshold=0)
            if abs(values[0] - iterative.lambda_min) > 1e-8:
                bad.append(f"lambda_min trial {trial} {variant}")
            if abs(values[-1] - iterative.lambda_max) > 1e-8:
                bad.append(f"lambda_max trial {trial} {variant}")
            if variant == "delta_hat" and (values[0] < -1e-10 or values[-1] > 2 + 1e-10):
                bad.append(f"hat range trial {trial}: [{values[0]}, {values[-1]}]")
        tilde = assemble(g, "delta_tilde", excluded={k_vertex})
        direct = np.sort(np.linalg.eigvals(tilde.dense()).real)
        via_hat = full_spectrum(tilde)
        if np.abs(direct - via_hat).max() > 1e-10:
            bad.append(f"similarity trial {trial}")
    return [_result("spectral/solver-agreement", bad)]


def _check_branching_sweeps() -> list[CheckResult]:
    """Sweep bound reports, monotonicity and theory agreement on G family."""
    results = []
    cases = [
        (BranchingParams(1, 1, 4), "gamma-1"),
        (BranchingParams(0, 2, 6), "gamma-0"),
        (BranchingParams(Fraction(1, 2), 1, 6), "gamma-half"),
    ]
    for params, tag in cases:
        bad = []
        g = branching_graph(params, extend_stubs=True)
        g.validate()
        result = sweep(g, default_schedule(g), params=params)
        for step in result.steps:
            for check in bound_report(step):
                if not check.satisfied:
                    bad.append(f"k={step.inner}: {check.name} "
                               f"({check.lhs:.6g} vs {check.rhs:.6g})")
        bottoms = [s.inf_delta for s in result.steps]
        if any(b < a - 1e-10 for a, b in zip(bottoms, bottoms[1:])):
            bad.append(f"inf_delta not monotone: {bottoms}")
        last = result.steps[-1]
        theory = gn_theory(params, last.inner + 1)
        if last.alpha_witness != theory.alpha_upper:
            bad.append(f"witness {last.alpha_witness} != theory {theory.alpha_upper}")
        if params.gamma >= 1 and last.alpha_dka != theory.alpha_lower:
            bad.append(f"dka {last.alpha_dka} != theory {theory.alpha_lower}")
        if params.gamma < 1 and last.alpha_dka < theory.alpha_lower:
            bad.append("dka below the theoretical infimum")
        results.append(_result(f"branching/{tag}-sweep", bad))
    return results


def _check_gamma0_quotients() -> list[CheckResult]:
    """Indicator quotient: formula == measured, bounded by [c] past one shell."""
    params = BranchingParams(0, 2, 6)
    g = branching_graph(params, extend_stubs=True)
    bracket = 2
    bad = []
    for k in range(2, params.k_max):
        for n in range(k + 1, params.k_max + 1):
            formula = annulus_indicator_quotient(params, k, n)
            measured = measured_indicator_quotient(g, k, n)
            if formula != measured:
                bad.append(f"(k={k}, n={n}): {formula} != {measured}")
            if n == k + 1:
                # a single shell always gives exactly [c] + 1
                if formula != bracket + 1:
                    bad.append(f"(k={k}, n={n}): single shell {formula}")
            elif formula > bracket:
                bad.append(f"(k={k}, n={n}): {formula} > [c]")
    return [_result("branching/gamma-0-quotient", bad)]


def _check_shell_inequality() -> list[CheckResult]:
    params = BranchingParams(Fraction(1, 2), 1, 6)
    g = branching_graph(params, extend_stubs=True)
    rng = np.random.default_rng(CORPUS_SEED + 3)
    support = [v for v in range(g.vertex_count) if 3 <= g.generation[v] <= 5]
    bad = []
    for trial in range(20):
        values = rng.standard_normal(len(support))
        phi = FunctionVector(vertices=tuple(support), values=tuple(values))
        report = shell_inequality_check(g, params, phi)
        if not report.ok:
            bad.append(f"trial {trial}: {report.lhs} < {report.rhs}")
    return [_result("branching/shell-inequality", bad)]


def _check_tessellations() -> list[CheckResult]:
    results = []
    rng = np.random.default_rng(CORPUS_SEED + 4)
    for p, q in ((3, 7), (4, 4), (5, 4)):
        bad = []
        g = tessellation_patch(TessellationParams(p, q, 3))
        g.validate()
        expected = 1 - Fraction(q, 2) + Fraction(q, p)
        for v in g.interior_vertices():
            if vertex_curvature(g, v) != expected:
                bad.append(f"curvature at {v}")
                break
        faces_with_outer = len(g.faces) + 1
        if g.vertex_count - g.edge_count + faces_with_outer != 2:
            bad.append("Euler count")
        for trial in range(15):
            members = _random_interior_subset(g, rng)
            ok, slack = isoperimetric_check(g, members)
            if not ok:
                bad.append(f"isoperimetry trial {trial}: slack {slack}")
            face_sum = face_sum_check(g, members)
            if not face_sum.ok:
                bad.append(f"face sum trial {trial}: {face_sum.lhs} != {face_sum.rhs}")
            if not face_sum.face_bound_ok:
                bad.append(f"face bound trial {trial}")
        result = sweep(g, default_schedule(g))
        for step in result.steps:
            if step.alpha_tess != max(Fraction(0), 1 - Fraction(6, q)):
                bad.append(f"alpha_tess at k={step.inner}")
            for check in bound_report(step):
                if not check.satisfied:
                    bad.append(f"k={step.inner}: {check.name}")
        results.append(_result(f"tessellation/{p}-{q}", bad))
    return results


def _result(name: str, bad: list) -> CheckResult:
    if bad:
        shown = "; ".join(bad[:4])
        if len(bad) > 4:
            shown += f"; and {len(bad) - 4} more"
        return CheckResult(name=name, passed=False, detail=shown)
    return CheckResult(name=name, passed=True, detail="")


_SUITES = (
    _check_identities,
    _check_sandwich_and_norm,
    _check_solver_agreement,
    _check_branching_sweeps,
    _check_gamma0_quotients,
    _check_shell_inequality,
    _check_tessellations,
)


def verify(threads: int = 1) -> list[CheckResult]:
    """Run the whole corpus; the report order never depends on the thread count."""
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            groups = list(pool.map(lambda fn: fn(), _SUITES))
    else:
        groups = [fn() for fn in _SUITES]
    return [item for group in groups for item in group]

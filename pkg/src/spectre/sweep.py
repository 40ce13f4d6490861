"""Growing-annulus sweeps tracking the essential spectrum from above.

Restricting a Laplacian to the annulus between an inner ball B_k and an
outer truncation at layer R produces a family of finite matrices whose
bottom eigenvalue increases with k and decreases with R.  The annulus
bottom always sits at or above the infimum of the untruncated exterior
operator, so the truncation bias has a known sign.  Each sweep step
collects degree statistics, certified Cheeger bounds, a witness ratio
and the spectral extremes of the plain and normalized restrictions,
side by side with the closed-form predictions for the branching family.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .curvature import vertex_curvature
from .generators import BranchingParams, GeneratorError, branch_count, generation_sizes
from .graph import Graph, GraphError
from .kernels import min_ratio_connected
from .operators import assemble, dirichlet_annulus
from .spectral import DENSE_THRESHOLD, spectrum_summary

CSV_COLUMNS = (
    "k",
    "R",
    "m_K",
    "M_K",
    "kappa_K",
    "alpha_dka",
    "alpha_tess",
    "alpha_witness",
    "inf_delta",
    "inf_hat",
    "sup_hat",
    "theory_alpha_lower",
    "theory_alpha_upper",
)


# -- closed forms for the branching family ---------------------------------------


@dataclass(frozen=True)
class GnTheory:
    """Closed-form Cheeger bounds for the exterior of the first n-1 generations.

    ``alpha_upper`` is the boundary ratio of the full generation-n shell.
    ``alpha_lower`` is the infimum over generations j >= n of
    (b_j - 1)/(N_j + b_j), whose denominator is the interior degree of the
    construction; ``alpha_lower_variant`` uses the denominator 1 + N_j + b_j
    instead.  Both are reported because the two disagree by one unit in the
    degree while sharing the same limit.  ``alpha_limit`` is that limit.
    """

    n: int
    alpha_upper: Fraction
    alpha_lower: Fraction
    alpha_lower_variant: Fraction
    alpha_limit: Fraction


def _tail_ratio_at_least(c: Fraction, gamma: Fraction, size: int, bound: Fraction, extra: int) -> bool:
    """Is (c N^gamma - 1)/(extra + N + c N^gamma) >= bound for every N >= size?

    For gamma >= 1 the left side increases in N, so checking at N = size is
    enough.  The comparison is exact: with gamma = p/q the condition
    c (1 - bound) N^gamma >= 1 + bound (extra + N) is raised to the q-th power.
    """
    if bound >= 1:
        return False
    lhs_coeff = c * (1 - bound)
    rhs = 1 + bound * (extra + size)
    target = rhs / lhs_coeff
    if target <= 1:
        return True
    p, q = gamma.numerator, gamma.denominator
    return Fraction(size) ** p >= target**q


def _ratio_infimum(params: BranchingParams, size: int) -> tuple[Fraction, Fraction]:
    """Exact infimum over the generation tail of both lower-bound ratios."""
    gamma, c = params.gamma, params.c
    if gamma < 1:
        # b_j ~ c N^gamma = o(N_j), so both ratios tend to 0; the infimum
        # over the tail is exactly 0.
        return Fraction(0), Fraction(0)
    plain = variant = Fraction(1)
    for _ in range(1000):
        b = branch_count(params, size)
        if b == 1:
            # the recursion stalls and every later generation repeats this
            # one with ratio 0
            return Fraction(0), Fraction(0)
        plain = min(plain, Fraction(b - 1, size + b))
        variant = min(variant, Fraction(b - 1, 1 + size + b))
        size *= b
        if _tail_ratio_at_least(c, gamma, size, plain, 0) and _tail_ratio_at_least(
            c, gamma, size, variant, 1
        ):
            return plain, variant
    raise GeneratorError("generation ratio infimum did not stabilize")


def gn_theory(params: BranchingParams, n: int) -> GnTheory:
    """Predicted Cheeger bounds when the first n-1 generations are removed."""
    if not 2 <= n <= params.k_max:
        raise GeneratorError(f"generation index {n} outside 2..{params.k_max}")
    sizes = generation_sizes(params)
    size_n = sizes[n - 1]
    b_n = branch_count(params, size_n)
    upper = Fraction(1 + b_n, size_n + b_n)
    lower, lower_variant = _ratio_infimum(params, size_n)
    if params.gamma < 1:
        limit = Fraction(0)
    elif params.gamma == 1:
        limit = params.c / (1 + params.c)
    else:
        limit = Fraction(1)
    return GnTheory(
        n=n,
        alpha_upper=upper,
        alpha_lower=lower,
        alpha_lower_variant=lower_variant,
        alpha_limit=limit,
    )


def annulus_indicator_quotient(params: BranchingParams, k: int, n: int) -> Fraction:
    """Rayleigh quotient of the indicator of generations k+1..n, gamma = 0 only.

    With a constant branch count [c] the boundary has [c] (N_k + N_n) edges
    while the indicator has one unit of counting mass per vertex, giving
    [c] (N_k + N_n) / sum of N_{k+1}..N_n exactly.
    """
    if params.gamma != 0:
        raise GeneratorError("the indicator quotient formula needs gamma = 0")
    if not 2 <= k < n <= params.k_max:
        raise GeneratorError(f"need 2 <= k < n <= {params.k_max}, got k={k} n={n}")
    sizes = generation_sizes(params)
    bracket = branch_count(params, 1)
    return Fraction(bracket * (sizes[k - 1] + sizes[n - 1]), sum(sizes[k:n]))


def measured_indicator_quotient(g: Graph, k: int, n: int) -> Fraction:
    """The same quotient evaluated on an actual graph through the operator."""
    labels = g.generation
    if labels is None:
        raise GraphError("the graph carries no layer labels")
    members = [v for v in range(g.vertex_count) if k < labels[v] <= n]
    if not members:
        raise GraphError(f"no vertices in generations {k + 1}..{n}")
    outside = {
        v for v in range(g.vertex_count) if labels[v] <= k or not g.is_interior(v)
    }
    matrix = assemble(g, "delta", excluded=outside)
    position = {int(v): i for i, v in enumerate(matrix.mask)}
    chi = [0] * matrix.dimension
    for v in members:
        if v not in position:
            raise GraphError(f"vertex {v} of the indicator is not interior")
        chi[position[v]] = 1
    image = matrix.apply_int(chi)
    form = sum(a * b for a, b in zip(image, chi))
    return Fraction(form, len(members))


# -- sweep records ----------------------------------------------------------------


@dataclass(frozen=True)
class SweepStep:
    """Everything measured on one annulus, inner ball B_k to outer layer R.

    ``m_K`` and ``M_K`` range over all interior vertices beyond B_k, not just
    the annulus, mirroring the exterior degree bounds they stand in for;
    ``annulus_min_degree`` is the minimum over the annulus itself and is the
    sharp single-vertex test bound.  Spectral values carry the one-sided
    truncation bias: ``inf_delta`` and ``inf_hat`` can only overestimate the
    untruncated exterior infimum.
    """

    inner: int
    outer: int
    annulus_size: int
    annulus_min_degree: int
    m_K: int
    M_K: int
    kappa_max: Fraction | None
    alpha_dka: Fraction
    alpha_tess: Fraction | None
    alpha_witness: Fraction | None
    inf_delta: float
    inf_hat: float
    sup_hat: float
    theory_alpha_lower: Fraction | None
    theory_alpha_upper: Fraction | None
    theory_alpha_lower_variant: Fraction | None


@dataclass(frozen=True)
class SweepResult:
    schedule: tuple[tuple[int, int], ...]
    steps: tuple[SweepStep, ...]


def default_schedule(g: Graph) -> list[tuple[int, int]]:
    """Grow the inner ball one layer at a time up to the last interior layer."""
    lowest, _ = g.layer_range()
    top = g.max_interior_label()
    if top <= lowest:
        raise GraphError("no room for an annulus between the first and last layer")
    return [(k, top) for k in range(lowest, top)]


def _certified_lower(step: SweepStep) -> Fraction:
    best = step.alpha_dka
    if step.alpha_tess is not None and step.alpha_tess > best:
        best = step.alpha_tess
    return best


def _run_step(
    g: Graph,
    k: int,
    outer: int,
    params: BranchingParams | None,
    witness_max_size: int | None,
    tol: float,
    dense_threshold: int,
) -> SweepStep:
    delta = dirichlet_annulus(g, k, outer, "delta")
    hat = delta.with_variant("delta_hat")
    mask = [int(v) for v in delta.mask]
    labels = g.generation

    summary_delta = spectrum_summary(delta, tol=tol, dense_threshold=dense_threshold)
    summary_hat = spectrum_summary(hat, tol=tol, dense_threshold=dense_threshold)

    inner_ball = {v for v in range(g.vertex_count) if labels[v] <= k}
    m_k, big_m_k = g.interior_degree_range(excluded=inner_ball)
    annulus_min_degree = min(g.degree(v) for v in mask)

    surplus = Fraction(1)
    for v in mask:
        back, forward = g.back_forward_degrees(v)
        surplus = min(surplus, Fraction(forward - back, g.degree(v)))
    alpha_dka = max(surplus, Fraction(0))

    kappa_max = None
    alpha_tess = None
    if g.faces is not None:
        kappa_max = max(vertex_curvature(g, v) for v in mask)
        alpha_tess = max(1 - Fraction(6, annulus_min_degree), Fraction(0))

    in_mask = set(mask)
    witness = None
    for layer in range(k + 1, outer + 1):
        shell = [v for v in mask if labels[v] == layer]
        if not shell:
            continue
        ratio = g.vertex_set(shell).boundary_ratio()
        if witness is None or ratio < witness:
            witness = ratio
    if witness_max_size:
        indptr, indices = g.csr()
        allowed = [1 if v in in_mask else 0 for v in range(g.vertex_count)]
        found = min_ratio_connected(indptr, indices, allowed, witness_max_size)
        if found is not None:
            boundary, area, _ = found
            ratio = Fraction(boundary, area)
            if witness is None or ratio < witness:
                witness = ratio

    theory_lower = theory_upper = theory_variant = None
    if params is not None and 2 <= k + 1 <= params.k_max:
        theory = gn_theory(params, k + 1)
        theory_lower = theory.alpha_lower
        theory_upper = theory.alpha_upper
        theory_variant = theory.alpha_lower_variant

    return SweepStep(
        inner=k,
        outer=outer,
        annulus_size=len(mask),
        annulus_min_degree=annulus_min_degree,
        m_K=m_k,
        M_K=big_m_k,
        kappa_max=kappa_max,
        alpha_dka=alpha_dka,
        alpha_tess=alpha_tess,
        alpha_witness=witness,
        inf_delta=summary_delta.lambda_min,
        inf_hat=summary_hat.lambda_min,
        sup_hat=summary_hat.lambda_max,
        theory_alpha_lower=theory_lower,
        theory_alpha_upper=theory_upper,
        theory_alpha_lower_variant=theory_variant,
    )


def sweep(
    g: Graph,
    schedule,
    params: BranchingParams | None = None,
    witness_max_size: int | None = None,
    threads: int = 1,
    tol: float = 1e-9,
    dense_threshold: int = DENSE_THRESHOLD,
) -> SweepResult:
    """Run every (k, R) step of the schedule; steps are independent.

    The result list follows the schedule order no matter how many worker
    threads run, and rerunning with a different thread count changes no
    emitted value.
    """
    pairs = []
    for entry in schedule:
        k, outer = entry
        k, outer = int(k), int(outer)
        if k >= outer:
            raise GraphError(f"schedule step ({k}, {outer}) has no annulus")
        pairs.append((k, outer))
    if not pairs:
        raise GraphError("empty sweep schedule")

    def run(pair):
        return _run_step(g, pair[0], pair[1], params, witness_max_size, tol, dense_threshold)

    if threads > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            steps = list(pool.map(run, pairs))
    else:
        steps = [run(pair) for pair in pairs]
    return SweepResult(schedule=tuple(pairs), steps=tuple(steps))


# -- per-step inequality report ----------------------------------------------------


@dataclass(frozen=True)
class BoundCheck:
    name: str
    lhs: float
    rhs: float
    satisfied: bool
    margin: float


def bound_report(step: SweepStep, tol: float = 1e-9) -> tuple[BoundCheck, ...]:
    """Named inequalities every step must satisfy, with their margins.

    The sandwich checks use the best certified Cheeger lower bound, so they
    remain valid bounds even when the true constant is larger.
    """
    alpha = min(_certified_lower(step), Fraction(1))
    width = math.sqrt(max(0.0, 1.0 - float(alpha) ** 2))
    checks = [
        ("hat_lower_sandwich", 1.0 - width, step.inf_hat),
        ("hat_upper_sandwich", step.sup_hat, 1.0 + width),
        ("delta_lower_degree", step.m_K * step.inf_hat, step.inf_delta),
        ("delta_upper_degree", step.inf_delta, step.M_K * step.inf_hat),
        ("delta_single_vertex", step.inf_delta, float(step.annulus_min_degree)),
        ("delta_combined_lower", step.m_K * (1.0 - width), step.inf_delta),
    ]
    report = [
        BoundCheck(name, lhs, rhs, lhs <= rhs + tol, rhs - lhs) for name, lhs, rhs in checks
    ]
    if step.alpha_witness is not None:
        gap = step.alpha_witness - alpha
        report.append(
            BoundCheck(
                "cheeger_bracket",
                float(alpha),
                float(step.alpha_witness),
                gap >= 0,
                float(gap),
            )
        )
    return tuple(report)


# -- CSV emission -------------------------------------------------------------------


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_sweep_csv(result: SweepResult, fh) -> None:
    """One row per step; rationals as p/q, floats with 17 significant digits."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for step in result.steps:
        writer.writerow(
            [
                _cell(step.inner),
                _cell(step.outer),
                _cell(step.m_K),
                _cell(step.M_K),
                _cell(step.kappa_max),
                _cell(step.alpha_dka),
                _cell(step.alpha_tess),
                _cell(step.alpha_witness),
                _cell(step.inf_delta),
                _cell(step.inf_hat),
                _cell(step.sup_hat),
                _cell(step.theory_alpha_lower),
                _cell(step.theory_alpha_upper),
            ]
        )

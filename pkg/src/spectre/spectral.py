"""Eigenvalue computation and the named spectral inequality checks.

The iterative path is a Lanczos iteration with full reorthogonalization and
a fixed seed, so results are reproducible.  Convergence is declared through
the Ritz residual |beta_j * y_j|; if the requested end of the spectrum
stalls, the iteration is retried on the reflected operator
2*norm_inf(M)*I - M, whose top end is the original bottom end.

delta_tilde is never eigensolved directly: it shares its spectrum with
delta_hat through conjugation by D^1/2, so all queries are routed there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .generators import BranchingParams, branch_count, generation_sizes
from .graph import Graph
from .isoperimetry import cheeger_exact
from .operators import FunctionVector, LaplacianMatrix, OperatorError, quadratic_form

SEED = 0x5EED
DENSE_THRESHOLD = 2048


class SpectralError(RuntimeError):
    """Raised when a spectral computation is out of contract."""


class ConvergenceError(SpectralError):
    """Raised when the iterative solver misses its residual tolerance."""


@dataclass(frozen=True)
class SpectralSummary:
    variant: str
    dimension: int
    lambda_min: float
    lambda_max: float
    residual_min: float
    residual_max: float
    iterations: int
    converged: bool
    method: str


def _symmetric_form(matrix: LaplacianMatrix) -> LaplacianMatrix:
    if matrix.variant == "delta_tilde":
        return matrix.with_variant("delta_hat")
    return matrix


def full_spectrum(matrix: LaplacianMatrix, dense_threshold: int = DENSE_THRESHOLD) -> np.ndarray:
    """All eigenvalues, ascending, through the dense symmetric solver."""
    sym = _symmetric_form(matrix)
    if sym.dimension > dense_threshold:
        raise SpectralError(
            f"dimension {sym.dimension} exceeds the dense threshold {dense_threshold}"
        )
    return np.linalg.eigvalsh(sym.dense())


def _lanczos_run(apply, n: int, tol: float, maxiter: int, seed: int, check_every: int = 20):
    """One Lanczos sweep; returns (theta_min, theta_max, res_min, res_max, steps)."""
    rng = np.random.Generator(np.random.PCG64(seed))
    steps = min(maxiter, n)
    V = np.zeros((n, steps))
    q = rng.standard_normal(n)
    V[:, 0] = q / np.linalg.norm(q)
    alphas: list[float] = []
    betas: list[float] = []

    def ritz(j, beta):
        T = np.diag(alphas)
        if j > 0:
            off = np.array(betas[:j])
            T += np.diag(off, 1) + np.diag(off, -1)
        theta, Y = np.linalg.eigh(T)
        res_min = abs(beta * Y[-1, 0])
        res_max = abs(beta * Y[-1, -1])
        return theta[0], theta[-1], res_min, res_max

    for j in range(steps):
        w = apply(V[:, j])
        alphas.append(float(V[:, j] @ w))
        w = w - alphas[j] * V[:, j]
        if j > 0:
            w = w - betas[j - 1] * V[:, j - 1]
        # full reorthogonalization, applied twice for safety
        basis = V[:, : j + 1]
        w = w - basis @ (basis.T @ w)
        w = w - basis @ (basis.T @ w)
        beta = float(np.linalg.norm(w))
        last = j + 1 == steps
        if last or beta < 1e-13 or (j + 1) % check_every == 0:
            lo, hi, res_min, res_max = ritz(j, beta)
            if (res_min <= tol and res_max <= tol) or last or beta < 1e-13:
                return lo, hi, res_min, res_max, j + 1
        betas.append(beta)
        V[:, j + 1] = w / beta
    raise AssertionError("unreachable")


def extremal_eigenvalues(
    matrix: LaplacianMatrix,
    which: str = "both",
    tol: float = 1e-9,
    maxiter: int = 600,
    seed: int = SEED,
) -> SpectralSummary:
    """Extreme eigenvalues through Lanczos with the reflected-operator fallback."""
    if which not in ("min", "max", "both"):
        raise SpectralError(f"unknown which={which!r}")
    sym = _symmetric_form(matrix)
    n = sym.dimension
    if n == 1:
        lam = float(sym.apply(np.ones(1))[0])
        return SpectralSummary(matrix.variant, 1, lam, lam, 0.0, 0.0, 1, True, "lanczos")
    lo, hi, res_min, res_max, steps = _lanczos_run(sym.apply, n, tol, maxiter, seed)
    need_min = which in ("min", "both")
    need_max = which in ("max", "both")
    if (need_min and res_min > tol) or (need_max and res_max > tol):
        shift = 2.0 * sym.norm_inf()
        r_lo, r_hi, r_res_min, r_res_max, extra = _lanczos_run(
            lambda x: shift * x - sym.apply(x), n, tol, maxiter, seed
        )
        steps += extra
        if need_min and res_min > tol and r_res_max <= res_min:
            lo, res_min = shift - r_hi, r_res_max
        if need_max and res_max > tol and r_res_min <= res_max:
            hi, res_max = shift - r_lo, r_res_min
    if (need_min and res_min > tol) or (need_max and res_max > tol):
        raise ConvergenceError(
            f"Lanczos residuals ({res_min:.2e}, {res_max:.2e}) above {tol:.2e} "
            f"after {steps} steps on dimension {n}"
        )
    return SpectralSummary(
        variant=matrix.variant,
        dimension=n,
        lambda_min=lo,
        lambda_max=hi,
        residual_min=res_min,
        residual_max=res_max,
        iterations=steps,
        converged=True,
        method="lanczos",
    )


def spectrum_summary(
    matrix: LaplacianMatrix,
    tol: float = 1e-9,
    dense_threshold: int = DENSE_THRESHOLD,
) -> SpectralSummary:
    """Extremes by the cheapest trustworthy route; dense when small enough."""
    sym = _symmetric_form(matrix)
    if sym.dimension <= dense_threshold:
        dense = sym.dense()
        values, vectors = np.linalg.eigh(dense)
        res_min = float(np.linalg.norm(dense @ vectors[:, 0] - values[0] * vectors[:, 0]))
        res_max = float(np.linalg.norm(dense @ vectors[:, -1] - values[-1] * vectors[:, -1]))
        return SpectralSummary(
            variant=matrix.variant,
            dimension=sym.dimension,
            lambda_min=float(values[0]),
            lambda_max=float(values[-1]),
            residual_min=res_min,
            residual_max=res_max,
            iterations=0,
            converged=True,
            method="dense",
        )
    return extremal_eigenvalues(matrix, tol=tol)


@dataclass(frozen=True)
class SandwichReport:
    ok: bool
    lambda_min: float
    lambda_max: float
    lower: float
    upper: float
    margin_low: float
    margin_high: float


def sandwich_check(
    matrix: LaplacianMatrix,
    alpha,
    tol: float = 1e-9,
    dense_threshold: int = DENSE_THRESHOLD,
) -> SandwichReport:
    """Spectrum of the normalized restriction against [1 -/+ sqrt(1-alpha^2)].

    alpha must be a certified Cheeger lower bound for the same excluded set;
    the check then verifies the two-sided spectral sandwich.
    """
    if matrix.variant not in ("delta_hat", "delta_tilde"):
        raise OperatorError("the sandwich applies to the normalized variants")
    a = float(alpha)
    if not 0.0 <= a <= 1.0:
        raise SpectralError(f"alpha = {a} outside [0, 1]")
    summary = spectrum_summary(matrix, tol=tol, dense_threshold=dense_threshold)
    gap = math.sqrt(max(0.0, 1.0 - a * a))
    lower, upper = 1.0 - gap, 1.0 + gap
    margin_low = summary.lambda_min - lower
    margin_high = upper - summary.lambda_max
    return SandwichReport(
        ok=margin_low >= -tol and margin_high >= -tol,
        lambda_min=summary.lambda_min,
        lambda_max=summary.lambda_max,
        lower=lower,
        upper=upper,
        margin_low=margin_low,
        margin_high=margin_high,
    )


@dataclass(frozen=True)
class NormCheckReport:
    ok: bool
    alpha: Fraction
    norm: float
    lower: float
    upper: float


def transition_norm_checks(g: Graph, excluded=(), tol: float = 1e-9) -> NormCheckReport:
    """Norm of the restricted transition operator against its Cheeger bounds.

    ||A_hat restricted|| lies in [1 - alpha, sqrt(1 - alpha^2)] for the exact
    Cheeger constant alpha of the excluded set.  The degree-weighted
    transition operator has the same norm by conjugation.  The host must be
    small enough for the exact alpha enumeration.
    """
    from .operators import assemble  # local import to avoid a cycle at load

    estimate = cheeger_exact(g, excluded)
    if estimate.lower is None:
        raise SpectralError("exact Cheeger enumeration was not exhaustive")
    alpha = estimate.lower
    hat = assemble(g, "delta_hat", excluded)
    spectrum = np.linalg.eigvalsh(hat.dense())
    norm = float(np.abs(1.0 - spectrum).max())
    a = float(alpha)
    lower = 1.0 - a
    upper = math.sqrt(max(0.0, 1.0 - a * a))
    ok = (norm >= lower - tol) and (norm <= upper + tol)
    return NormCheckReport(ok=ok, alpha=alpha, norm=norm, lower=lower, upper=upper)


@dataclass(frozen=True)
class ShellCheckReport:
    ok: bool
    lhs: float
    rhs: float
    first_shell: int
    last_shell: int


def shell_inequality_check(
    g: Graph,
    params: BranchingParams,
    phi: FunctionVector,
    tol: float = 1e-10,
) -> ShellCheckReport:
    """Shell-wise lower bound for the Dirichlet form on a branching graph.

    For phi supported on generations k..m (k >= 2),
    <Delta phi, phi> >= sum over i of (sqrt(b_i) |phi_i| - |phi_{i+1}|)^2
    where b_i is the forward fan-out of generation i and |phi_i| the norm of
    the shell restriction.  Needs the perfect forward partition, so g must be
    the branching graph built from params.
    """
    g._require_labels()
    shells: dict[int, float] = {}
    for v, x in zip(phi.vertices, phi.values):
        lab = g.generation[v]
        shells[lab] = shells.get(lab, 0.0) + float(x) * float(x)
    if not shells:
        raise SpectralError("empty support")
    first, last = min(shells), max(shells)
    if first < 2:
        raise SpectralError("support must start at generation 2 or later")
    sizes = generation_sizes(params)
    if last > len(sizes):
        raise SpectralError("support extends beyond the parametrized generations")
    lhs = quadratic_form(g, phi)
    rhs = 0.0
    for i in range(first, last + 1):
        b = branch_count(params, sizes[i - 1])
        here = math.sqrt(shells.get(i, 0.0))
        there = math.sqrt(shells.get(i + 1, 0.0))
        term = math.sqrt(b) * here - there
        rhs += term * term
    return ShellCheckReport(
        ok=lhs >= rhs - tol * max(1.0, abs(lhs)),
        lhs=lhs,
        rhs=rhs,
        first_shell=first,
        last_shell=last,
    )

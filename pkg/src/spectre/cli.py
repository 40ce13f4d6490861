"""Command line front end.

Every subcommand either builds a graph from a named family or loads one
from a JSON file, then emits its result as JSON or CSV.  All outputs are
deterministic: identical configurations give byte-identical files, and
the thread count never changes an emitted value.  Exit codes: 0 success,
1 computation error, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from contextlib import contextmanager
from dataclasses import asdict
from fractions import Fraction

from .curvature import curvature_report, write_curvature_csv
from .generators import (
    BranchingParams,
    GeneratorError,
    TessellationParams,
    branching_graph,
    complete_graph,
    regular_tree,
    tessellation_patch,
)
from .graph import Graph, GraphError, graph_to_dict, load_graph
from .isoperimetry import (
    cheeger_exact,
    cheeger_lower_forward_surplus,
    cheeger_lower_tessellation,
)
from .operators import OperatorError, assemble, dirichlet_annulus, write_coordinate_dump
from .spectral import DENSE_THRESHOLD, SpectralError, spectrum_summary
from .sweep import default_schedule, sweep, write_sweep_csv
from .verify import verify

FAMILIES = ("complete", "branching", "tree", "tessellation")

_RUN_ERRORS = (GraphError, GeneratorError, OperatorError, SpectralError, OSError)


class ConfigError(Exception):
    """Anything wrong with flags or the --config file."""


def _add_source_arguments(sub, generate_only: bool = False) -> None:
    sub.add_argument(
        "family",
        nargs="?",
        choices=FAMILIES,
        help="graph family to build (or use --input)",
    )
    if not generate_only:
        sub.add_argument("--input", help="load a graph from this JSON file instead")
    sub.add_argument("--n", type=int, help="complete: number of vertices")
    sub.add_argument("--gamma", help="branching: growth exponent, a rational like 3/2")
    sub.add_argument("--c", help="branching: growth coefficient, a rational")
    sub.add_argument("--k-max", type=int, help="branching: number of generations")
    sub.add_argument(
        "--extend-stubs",
        action=argparse.BooleanOptionalAction,
        help="branching: append a stub generation so every real one is interior",
    )
    sub.add_argument("--branching", type=int, help="tree: children per vertex")
    sub.add_argument("--depth", type=int, help="tree: number of levels")
    sub.add_argument("--p", type=int, help="tessellation: face size")
    sub.add_argument("--q", type=int, help="tessellation: vertex degree")
    sub.add_argument("--layers", type=int, help="tessellation: rings to grow")


def _add_common(sub) -> None:
    sub.add_argument("--config", help="JSON file of options; explicit flags win")
    sub.add_argument("--output", help="output path, '-' for stdout (default)")


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, set]]:
    parser = argparse.ArgumentParser(
        prog="spectre",
        description="Spectral bounds on rapidly branching graphs and tessellations.",
    )
    subs = parser.add_subparsers(dest="command", required=True)
    allowed: dict[str, set] = {}

    gen = subs.add_parser(
        "generate",
        help="build a graph and emit it as JSON",
        epilog="JSON fields: n (vertex count), edges (pairs), faces (optional "
        "vertex cycles), generation (optional layer labels), interior "
        "(optional 0/1 flags, omitted when every vertex is interior).",
    )
    _add_source_arguments(gen, generate_only=True)
    _add_common(gen)

    cur = subs.add_parser(
        "curvature",
        help="per-vertex combinatorial curvature as CSV",
        epilog="CSV columns: vertex, degree, curvature (exact p/q), "
        "curvature_float (17 significant digits).",
    )
    _add_source_arguments(cur)
    cur.add_argument("--ball", type=int, help="exclude layers up to this label")
    _add_common(cur)

    chg = subs.add_parser(
        "cheeger",
        help="Cheeger bounds for the complement of a ball, as JSON",
        epilog="JSON keys: lower_dka (layer lower bound, p/q or null), "
        "lower_tess (tessellation lower bound, p/q or null), upper "
        "(best witness ratio, p/q or null), witness (vertex ids or "
        "null), method (how the upper bound was found).",
    )
    _add_source_arguments(chg)
    chg.add_argument("--ball", type=int, help="exclude layers up to this label")
    chg.add_argument(
        "--max-size", type=int, help="cap on the enumerated subset size"
    )
    _add_common(chg)

    spc = subs.add_parser(
        "spectrum",
        help="extreme eigenvalues of a Laplacian restriction, as JSON",
        epilog="JSON fields: variant, dimension, lambda_min, lambda_max, "
        "residual_min, residual_max, iterations, converged, method. "
        "--dump writes PREFIX.coo (row col value) and PREFIX.weights "
        "(vertex degree) for external cross-checks.",
    )
    _add_source_arguments(spc)
    spc.add_argument(
        "--variant",
        choices=("delta", "delta_tilde", "delta_hat"),
        help="operator variant (default delta)",
    )
    spc.add_argument("--ball", type=int, help="exclude layers up to this label")
    spc.add_argument("--inner", type=int, help="annulus: inner ball label")
    spc.add_argument("--outer", type=int, help="annulus: outer layer label")
    spc.add_argument("--tol", type=float, help="iterative residual tolerance")
    spc.add_argument(
        "--dense-threshold", type=int, help="largest dimension solved densely"
    )
    spc.add_argument("--dump", help="prefix for a coordinate-format matrix dump")
    _add_common(spc)

    swp = subs.add_parser(
        "sweep",
        help="growing-annulus sweep, one CSV row per (k, R) step",
        epilog="CSV columns: k (inner ball label), R (outer layer label), "
        "m_K / M_K (min/max interior degree beyond the inner ball), "
        "kappa_K (max curvature on the annulus, tessellations only), "
        "alpha_dka (layer Cheeger lower bound), alpha_tess "
        "(tessellation lower bound), alpha_witness (best upper "
        "witness ratio), inf_delta / inf_hat / sup_hat (spectral "
        "extremes of the annulus restrictions), theory_alpha_lower / "
        "theory_alpha_upper (closed forms for the branching family). "
        "Rationals are exact p/q strings; floats carry 17 significant "
        "digits; inapplicable cells stay empty.",
    )
    _add_source_arguments(swp)
    swp.add_argument(
        "--schedule", help="comma-separated k:R pairs, e.g. 2:7,3:7 (default: grow k)"
    )
    swp.add_argument(
        "--witness-max-size",
        type=int,
        help="also enumerate connected witnesses up to this size",
    )
    swp.add_argument("--tol", type=float, help="iterative residual tolerance")
    swp.add_argument(
        "--dense-threshold", type=int, help="largest dimension solved densely"
    )
    swp.add_argument("--threads", type=int, help="parallel sweep steps")
    _add_common(swp)

    ver = subs.add_parser(
        "verify",
        help="run the built-in property corpus; nonzero exit on any failure",
    )
    ver.add_argument("--threads", type=int, help="parallel suites")
    ver.add_argument("--config", help="JSON file of options; explicit flags win")

    for name, sub in subs.choices.items():
        allowed[name] = {
            action.dest
            for action in sub._actions
            if action.dest not in ("help", "command", "config")
        }
    return parser, allowed


def _merge_config(ns: argparse.Namespace, allowed: set) -> None:
    if getattr(ns, "config", None) is None:
        return
    try:
        with open(ns.config) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{ns.config}: invalid JSON at line {exc.lineno}: {exc.msg}"
        ) from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{ns.config}: expected a JSON object")
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"{ns.config}: unknown keys {unknown}")
    for key, value in data.items():
        if getattr(ns, key, None) is None:
            setattr(ns, key, value)


def _threads(ns: argparse.Namespace) -> int:
    if getattr(ns, "threads", None) is not None:
        value = int(ns.threads)
    else:
        env = os.environ.get("SPECTRE_THREADS")
        value = int(env) if env else (os.cpu_count() or 1)
    if value < 1:
        raise ConfigError(f"thread count must be positive, got {value}")
    return value


def _require(ns: argparse.Namespace, names: list[str], family: str) -> None:
    missing = [name for name in names if getattr(ns, name) is None]
    if missing:
        flags = ", ".join("--" + name.replace("_", "-") for name in missing)
        raise ConfigError(f"family {family!r} needs {flags}")


def _build_graph(ns: argparse.Namespace) -> tuple[Graph, BranchingParams | None]:
    family = ns.family
    source = getattr(ns, "input", None)
    if family is None and source is None:
        raise ConfigError("give a graph family or --input FILE")
    if family is not None and source is not None:
        raise ConfigError("give either a family or --input, not both")
    if source is not None:
        return load_graph(source), None
    if family == "complete":
        _require(ns, ["n"], family)
        return complete_graph(ns.n), None
    if family == "branching":
        _require(ns, ["gamma", "c", "k_max"], family)
        try:
            params = BranchingParams(ns.gamma, ns.c, ns.k_max)
        except GeneratorError as exc:
            raise ConfigError(str(exc)) from exc
        return branching_graph(params, extend_stubs=bool(ns.extend_stubs)), params
    if family == "tree":
        _require(ns, ["branching", "depth"], family)
        return regular_tree(ns.branching, ns.depth), None
    _require(ns, ["p", "q", "layers"], family)
    try:
        params = TessellationParams(ns.p, ns.q, ns.layers)
    except GeneratorError as exc:
        raise ConfigError(str(exc)) from exc
    return tessellation_patch(params), None


@contextmanager
def _open_output(ns: argparse.Namespace):
    path = getattr(ns, "output", None)
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def _ball_set(g: Graph, label: int | None) -> set:
    rim = {v for v in range(g.vertex_count) if not g.is_interior(v)}
    if label is None:
        return rim
    if g.generation is None:
        raise GraphError("--ball needs layer labels")
    return rim | {v for v in range(g.vertex_count) if g.generation[v] <= label}


def _fraction_cell(value) -> str | None:
    return None if value is None else str(Fraction(value))


def _cmd_generate(ns) -> int:
    g, _ = _build_graph(ns)
    with _open_output(ns) as fh:
        json.dump(graph_to_dict(g), fh)
        fh.write("\n")
    return 0


def _cmd_curvature(ns) -> int:
    g, _ = _build_graph(ns)
    report = curvature_report(g, excluded=_ball_set(g, ns.ball))
    with _open_output(ns) as fh:
        write_curvature_csv(report, fh)
    return 0


def _cmd_cheeger(ns) -> int:
    g, _ = _build_graph(ns)
    excluded = _ball_set(g, ns.ball)
    lower_dka = None
    if g.generation is not None:
        index = ns.ball if ns.ball is not None else min(g.generation) - 1
        lower_dka = cheeger_lower_forward_surplus(g, index).lower
    lower_tess = None
    if g.faces is not None:
        lower_tess = cheeger_lower_tessellation(g, excluded).lower
    exact = cheeger_exact(g, excluded, max_size=ns.max_size)
    payload = {
        "lower_dka": _fraction_cell(lower_dka),
        "lower_tess": _fraction_cell(lower_tess),
        "upper": _fraction_cell(exact.upper),
        "witness": None if exact.witness is None else list(exact.witness.members),
        "method": exact.method,
    }
    with _open_output(ns) as fh:
        json.dump(payload, fh)
        fh.write("\n")
    return 0


def _cmd_spectrum(ns) -> int:
    g, _ = _build_graph(ns)
    variant = ns.variant or "delta"
    tol = ns.tol if ns.tol is not None else 1e-9
    dense_threshold = (
        ns.dense_threshold if ns.dense_threshold is not None else DENSE_THRESHOLD
    )
    if (ns.inner is None) != (ns.outer is None):
        raise ConfigError("--inner and --outer go together")
    if ns.inner is not None:
        if ns.ball is not None:
            raise ConfigError("give --ball or an annulus, not both")
        matrix = dirichlet_annulus(g, ns.inner, ns.outer, variant)
    else:
        matrix = assemble(g, variant, excluded=_ball_set(g, ns.ball))
    summary = spectrum_summary(matrix, tol=tol, dense_threshold=dense_threshold)
    if ns.dump:
        write_coordinate_dump(matrix, ns.dump)
    with _open_output(ns) as fh:
        json.dump(asdict(summary), fh)
        fh.write("\n")
    return 0


def _parse_schedule(value) -> list[tuple[int, int]]:
    if isinstance(value, str):
        pairs = []
        for part in value.split(","):
            k, sep, outer = part.partition(":")
            if not sep:
                raise ConfigError(f"schedule entry {part!r} is not k:R")
            try:
                pairs.append((int(k), int(outer)))
            except ValueError as exc:
                raise ConfigError(f"schedule entry {part!r} is not k:R") from exc
        return pairs
    if isinstance(value, list) and all(
        isinstance(e, list) and len(e) == 2 and all(isinstance(x, int) for x in e)
        for e in value
    ):
        return [(e[0], e[1]) for e in value]
    raise ConfigError(f"schedule must be 'k:R,...' or [[k, R], ...], got {value!r}")


def _cmd_sweep(ns) -> int:
    g, params = _build_graph(ns)
    schedule = (
        _parse_schedule(ns.schedule) if ns.schedule is not None else default_schedule(g)
    )
    result = sweep(
        g,
        schedule,
        params=params,
        witness_max_size=ns.witness_max_size,
        threads=_threads(ns),
        tol=ns.tol if ns.tol is not None else 1e-9,
        dense_threshold=(
            ns.dense_threshold if ns.dense_threshold is not None else DENSE_THRESHOLD
        ),
    )
    with _open_output(ns) as fh:
        write_sweep_csv(result, fh)
    return 0


def _cmd_verify(ns) -> int:
    report = verify(threads=_threads(ns))
    failures = 0
    for item in report:
        if item.passed:
            print(f"PASS {item.name}")
        else:
            failures += 1
            print(f"FAIL {item.name}: {item.detail}")
    print(f"{len(report) - failures}/{len(report)} checks passed")
    return 1 if failures else 0


_COMMANDS = {
    "generate": _cmd_generate,
    "curvature": _cmd_curvature,
    "cheeger": _cmd_cheeger,
    "spectrum": _cmd_spectrum,
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser, allowed = build_parser()
    ns = parser.parse_args(argv)
    try:
        _merge_config(ns, allowed[ns.command])
        return _COMMANDS[ns.command](ns)
    except ConfigError as exc:
        print(f"spectre: {exc}", file=sys.stderr)
        return 2
    except _RUN_ERRORS as exc:
        print(f"spectre: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

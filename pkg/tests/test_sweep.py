"""Annulus sweeps: closed forms, measured quotients, CSV emission."""

import io
from fractions import Fraction

import pytest

from spectre.generators import BranchingParams, GeneratorError, TessellationParams, branching_graph, tessellation_patch
from spectre.graph import GraphError
from spectre.sweep import (
    CSV_COLUMNS,
    annulus_indicator_quotient,
    bound_report,
    default_schedule,
    gn_theory,
    measured_indicator_quotient,
    sweep,
    write_sweep_csv,
)


def test_gn_theory_linear_growth():
    # gamma = 1, c = 1: generation sizes 1, 2, 4, 16, 256
    theory = gn_theory(BranchingParams(1, 1, 5), 5)
    assert theory.alpha_upper == Fraction(257, 512)
    assert theory.alpha_lower == Fraction(255, 512)
    assert theory.alpha_lower_variant == Fraction(255, 513)
    assert theory.alpha_limit == Fraction(1, 2)


def test_gn_theory_superlinear_growth():
    theory = gn_theory(BranchingParams(2, 1, 4), 4)
    assert theory.alpha_lower == Fraction(511, 512)
    assert theory.alpha_upper == Fraction(262145, 262656)
    assert theory.alpha_limit == 1


def test_gn_theory_sublinear_growth():
    theory = gn_theory(BranchingParams("1/2", 1, 6), 4)
    assert theory.alpha_lower == 0
    assert theory.alpha_lower_variant == 0
    assert theory.alpha_limit == 0
    assert theory.alpha_upper > 0


def test_gn_theory_constant_growth():
    theory = gn_theory(BranchingParams(0, 2, 6), 2)
    assert theory.alpha_upper == Fraction(3, 4)
    assert theory.alpha_lower == 0
    assert theory.alpha_limit == 0


def test_gn_theory_limit_reflects_c():
    theory = gn_theory(BranchingParams(1, "3/2", 4), 2)
    assert theory.alpha_limit == Fraction(3, 5)


def test_gn_theory_lower_never_exceeds_upper():
    for gamma, c in [(0, 3), ("1/2", 1), (1, 1), (1, 2), ("3/2", 1), (2, 1)]:
        params = BranchingParams(gamma, c, 5)
        for n in range(2, 6):
            theory = gn_theory(params, n)
            assert theory.alpha_lower <= theory.alpha_upper
            assert theory.alpha_lower_variant <= theory.alpha_lower


def test_gn_theory_range_check():
    with pytest.raises(GeneratorError, match="outside"):
        gn_theory(BranchingParams(1, 1, 4), 5)
    with pytest.raises(GeneratorError, match="outside"):
        gn_theory(BranchingParams(1, 1, 4), 1)


def test_indicator_quotient_formula():
    params = BranchingParams(0, 2, 8)
    assert annulus_indicator_quotient(params, 2, 5) == Fraction(9, 7)
    # adjacent pair: the quotient is [c] + 1, not below [c]
    assert annulus_indicator_quotient(params, 2, 3) == 3
    assert annulus_indicator_quotient(params, 3, 4) == 3


def test_indicator_quotient_needs_constant_growth():
    with pytest.raises(GeneratorError, match="gamma = 0"):
        annulus_indicator_quotient(BranchingParams(1, 2, 6), 2, 4)
    with pytest.raises(GeneratorError, match="need 2 <="):
        annulus_indicator_quotient(BranchingParams(0, 2, 6), 4, 3)


def test_indicator_quotient_measured():
    params = BranchingParams(0, 2, 6)
    g = branching_graph(params)
    for k in range(2, 5):
        for n in range(k + 1, 6):
            assert measured_indicator_quotient(g, k, n) == annulus_indicator_quotient(params, k, n)


def test_measured_quotient_needs_labels():
    from spectre.generators import complete_graph

    with pytest.raises(GraphError, match="layer labels"):
        measured_indicator_quotient(complete_graph(4), 1, 2)


def test_default_schedule_branching():
    g = branching_graph(BranchingParams(1, 1, 4), extend_stubs=True)
    assert default_schedule(g) == [(1, 4), (2, 4), (3, 4)]


def test_default_schedule_tessellation():
    g = tessellation_patch(TessellationParams(3, 7, 4))
    assert default_schedule(g) == [(0, 3), (1, 3), (2, 3)]


def test_default_schedule_needs_room():
    g = tessellation_patch(TessellationParams(4, 4, 1))
    with pytest.raises(GraphError, match="no room"):
        default_schedule(g)


def test_sweep_step_exact_values():
    # outermost annulus of the gamma = 1, c = 1 truncation: a single 16-clique
    params = BranchingParams(1, 1, 4)
    g = branching_graph(params, extend_stubs=True)
    result = sweep(g, [(3, 4)], params=params)
    (step,) = result.steps
    assert step.inner == 3 and step.outer == 4
    assert step.annulus_size == 16
    assert step.annulus_min_degree == 32
    assert step.m_K == step.M_K == 32
    assert step.alpha_dka == Fraction(15, 32)
    assert step.alpha_witness == Fraction(17, 32)
    assert step.kappa_max is None and step.alpha_tess is None
    # 33 I - J on 16 vertices: eigenvalues 17 and 33
    assert step.inf_delta == pytest.approx(17.0, abs=1e-9)
    assert step.inf_hat == pytest.approx(17 / 32, abs=1e-11)
    assert step.sup_hat == pytest.approx(33 / 32, abs=1e-11)
    assert step.theory_alpha_lower == Fraction(15, 32)
    assert step.theory_alpha_upper == Fraction(17, 32)
    assert step.theory_alpha_lower_variant == Fraction(15, 33)


def test_sweep_matches_theory_on_last_annulus():
    params = BranchingParams(1, 1, 5)
    g = branching_graph(params, extend_stubs=True)
    result = sweep(g, [(4, 5)], params=params)
    (step,) = result.steps
    assert step.alpha_dka == step.theory_alpha_lower == Fraction(255, 512)
    assert step.alpha_witness == step.theory_alpha_upper == Fraction(257, 512)


def test_sweep_without_params_leaves_theory_empty():
    g = branching_graph(BranchingParams(1, 1, 4), extend_stubs=True)
    (step,) = sweep(g, [(3, 4)]).steps
    assert step.theory_alpha_lower is None
    assert step.theory_alpha_upper is None


def test_sweep_tessellation_columns():
    g = tessellation_patch(TessellationParams(3, 7, 4))
    result = sweep(g, default_schedule(g))
    for step in result.steps:
        assert step.alpha_tess == Fraction(1, 7)
        assert step.kappa_max == Fraction(-1, 6)
        assert step.inf_hat > 0


def test_sweep_monotone_in_annulus():
    params = BranchingParams(0, 2, 5)
    g = branching_graph(params, extend_stubs=True)
    by_k = sweep(g, [(1, 5), (2, 5), (3, 5), (4, 5)], params=params)
    values = [step.inf_delta for step in by_k.steps]
    assert all(b >= a - 1e-10 for a, b in zip(values, values[1:]))
    by_r = sweep(g, [(1, 2), (1, 3), (1, 4), (1, 5)], params=params)
    values = [step.inf_delta for step in by_r.steps]
    assert all(b <= a + 1e-10 for a, b in zip(values, values[1:]))


def test_sweep_thread_count_changes_nothing():
    params = BranchingParams(1, 1, 4)
    g = branching_graph(params, extend_stubs=True)
    schedule = default_schedule(g)
    assert sweep(g, schedule, params=params, threads=4) == sweep(g, schedule, params=params)


def test_sweep_rejects_bad_schedule():
    g = branching_graph(BranchingParams(1, 1, 4), extend_stubs=True)
    with pytest.raises(GraphError, match="no annulus"):
        sweep(g, [(3, 3)])
    with pytest.raises(GraphError, match="empty"):
        sweep(g, [])


def test_bound_report_names_and_margins():
    params = BranchingParams(1, 1, 4)
    g = branching_graph(params, extend_stubs=True)
    (step,) = sweep(g, [(3, 4)], params=params).steps
    report = bound_report(step)
    names = [check.name for check in report]
    assert names == [
        "hat_lower_sandwich",
        "hat_upper_sandwich",
        "delta_lower_degree",
        "delta_upper_degree",
        "delta_single_vertex",
        "delta_combined_lower",
        "cheeger_bracket",
    ]
    assert all(check.satisfied for check in report)
    by_name = {check.name: check for check in report}
    # m_K inf_hat == inf_delta == M_K inf_hat on a regular annulus
    assert by_name["delta_lower_degree"].margin == pytest.approx(0.0, abs=1e-8)
    assert by_name["cheeger_bracket"].margin == pytest.approx(float(Fraction(2, 32)), abs=1e-12)


def test_sweep_csv_round_trip():
    params = BranchingParams(1, 1, 4)
    g = branching_graph(params, extend_stubs=True)
    result = sweep(g, default_schedule(g), params=params)
    buf = io.StringIO()
    write_sweep_csv(result, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 1 + len(result.steps)
    last = dict(zip(CSV_COLUMNS, lines[-1].split(",")))
    assert last["k"] == "3" and last["R"] == "4"
    assert Fraction(last["alpha_dka"]) == Fraction(15, 32)
    assert last["alpha_tess"] == ""  # no face data on a branching graph
    assert float(last["inf_delta"]) == pytest.approx(17.0, abs=1e-9)
    assert Fraction(last["theory_alpha_upper"]) == Fraction(17, 32)

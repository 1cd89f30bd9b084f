"""Null-condition classification, closed forms, optimizers, scans, sweeps."""

import math

import pytest

from photonherald import (
    CaseId,
    SweepSpec,
    classify_constraint,
    closed_form_ps,
    golden_section_maximize,
    jf_length_scan,
    manifold_completion,
    optimize_ps,
    simulate_manifold_point,
    sweep_rows,
    verify_formula_against_simulator,
)
from photonherald.analysis import VALID_CASES

PEAK = 27.0 / 256.0
BETA_ONE_CYCLE = 0.41302457983158963
DEG30 = math.pi / 6


# ---------------------------------------------------------------------------
# constraint classification


def test_classify_sum_plus():
    case = classify_constraint(0.0, 0.0, math.pi / 6, math.pi / 3)
    assert case.case_id is CaseId.SUM_PLUS
    assert case.nu == 0
    assert case.is_valid


def test_classify_diff_plus():
    case = classify_constraint(0.0, math.pi, 2 * math.pi / 3, math.pi / 6)
    assert case.case_id is CaseId.DIFF_PLUS
    assert case.nu == -1


def test_classify_sum_minus():
    case = classify_constraint(0.0, 0.0, math.pi / 6, -math.pi / 2 - math.pi / 6)
    assert case.case_id is CaseId.SUM_MINUS


def test_classify_phase_violation():
    assert not classify_constraint(0.0, 0.1, math.pi / 6, math.pi / 3).is_valid


def test_classify_angle_violation():
    assert not classify_constraint(0.0, 0.0, 0.5, 0.6).is_valid


@pytest.mark.parametrize("case", VALID_CASES)
@pytest.mark.parametrize("theta1", [0.3, math.pi / 6, 1.0, 1.4])
def test_completion_classifies_back_to_itself(case, theta1):
    theta2, phi1, phi2 = manifold_completion(theta1, case)
    assert classify_constraint(phi1, phi2, theta1, theta2).case_id is case


def test_completion_of_violated_case_raises():
    with pytest.raises(ValueError):
        manifold_completion(0.5, CaseId.VIOLATED)


# ---------------------------------------------------------------------------
# closed form


def test_closed_form_at_thirty_degrees():
    assert closed_form_ps(0.0, DEG30, CaseId.SUM_PLUS) == pytest.approx(PEAK, abs=1e-15)


def test_closed_form_transparent_absorber_is_null():
    assert closed_form_ps(1.0, 0.8, CaseId.SUM_PLUS) == 0.0


def test_closed_form_one_cycle_mixer():
    got = closed_form_ps(BETA_ONE_CYCLE, DEG30, CaseId.DIFF_MINUS)
    assert got == pytest.approx(0.03633821830004222, abs=1e-14)


def test_closed_form_same_on_every_branch():
    vals = {closed_form_ps(0.3 - 0.2j, 0.7, case) for case in VALID_CASES}
    assert len(vals) == 1


def test_closed_form_violated_raises():
    with pytest.raises(ValueError):
        closed_form_ps(0.0, 0.5, CaseId.VIOLATED)


def test_closed_form_reflection_identity():
    """The complementary-angle form of the same surface: evaluating the
    cos^6 sin^2 family at theta equals the sin^6 cos^2 family at pi/2 - theta."""
    for beta in (0.0, -1.0, 0.25 + 0.55j):
        for theta1 in (0.2, DEG30, 0.9, 1.3):
            mirrored = (
                abs(1.0 - beta) ** 2
                * math.sin(math.pi / 2 - theta1) ** 6
                * math.cos(math.pi / 2 - theta1) ** 2
            )
            assert closed_form_ps(beta, theta1, CaseId.SUM_MINUS) == pytest.approx(
                mirrored, abs=1e-14
            )


def test_formula_matches_simulator_everywhere():
    dev = verify_formula_against_simulator(
        [0.3, DEG30, 0.9, 1.3],
        [0.0, -1.0, BETA_ONE_CYCLE, 0.25 + 0.55j],
    )
    assert dev < 1e-10


def test_simulator_benchmark_points():
    assert simulate_manifold_point(0.0, math.pi / 4, CaseId.SUM_PLUS) == pytest.approx(
        1.0 / 16.0, abs=1e-12
    )
    assert simulate_manifold_point(-1.0, DEG30, CaseId.SUM_PLUS) == pytest.approx(
        27.0 / 64.0, abs=1e-12
    )


def test_simulate_manifold_point_rejects_dead_source():
    with pytest.raises(ValueError):
        simulate_manifold_point(0.0, DEG30, CaseId.SUM_PLUS, p=0.0)


# ---------------------------------------------------------------------------
# optimization


def test_golden_section_on_parabola():
    x, fx = golden_section_maximize(lambda x: -((x - 1.3) ** 2), 0.0, 2.0)
    assert x == pytest.approx(1.3, abs=1e-7)
    assert fx == pytest.approx(0.0, abs=1e-12)


def test_optimum_sits_at_thirty_degrees():
    theta_star, ps_star = optimize_ps(0.0)
    symmetric = [DEG30, math.pi - DEG30, math.pi + DEG30, 2 * math.pi - DEG30]
    assert min(abs(theta_star - t) for t in symmetric) < 1e-6
    assert ps_star == pytest.approx(PEAK, abs=1e-10)


def test_optimum_value_scales_with_absorber():
    _, ps_star = optimize_ps(-1.0)
    assert ps_star == pytest.approx(27.0 / 64.0, abs=1e-10)
    _, ps_star = optimize_ps(1.0 / 3.0)
    assert ps_star == pytest.approx(3.0 / 64.0, abs=1e-10)


def test_optimum_with_complex_absorber():
    beta = 0.25 + 0.55j
    theta_star, ps_star = optimize_ps(beta)
    symmetric = [DEG30, math.pi - DEG30, math.pi + DEG30, 2 * math.pi - DEG30]
    assert min(abs(theta_star - t) for t in symmetric) < 1e-6
    assert ps_star == pytest.approx(PEAK * abs(1.0 - beta) ** 2, abs=1e-10)


def test_optimum_branch_independent():
    for case in VALID_CASES:
        _, ps_star = optimize_ps(0.0, case)
        assert ps_star == pytest.approx(PEAK, abs=1e-10)


# ---------------------------------------------------------------------------
# mixer length scans


def test_scan_interferometer_composition_values():
    rows = jf_length_scan([1, 4])
    assert [r.composition for r in rows] == ["interferometer", "interferometer"]
    assert rows[0].coefficient.real == pytest.approx(BETA_ONE_CYCLE, abs=1e-12)
    assert rows[0].ps_over_p2 == pytest.approx(0.03633821830004222, abs=1e-12)
    assert rows[1].ps_over_p2 == pytest.approx(0.044563330656564176, abs=1e-12)


def test_scan_running_best_approaches_supremum():
    rows = jf_length_scan(range(1, 13))
    best = max(r.ps_over_p2 for r in rows)
    assert best == pytest.approx(0.04675588965488818, abs=1e-12)
    assert abs(best - 3.0 / 64.0) < 5e-4
    # the supremum itself is never attained at integer length
    assert all(r.ps_over_p2 < 3.0 / 64.0 for r in rows)


def test_scan_pair_herald_composition():
    rows = jf_length_scan([2], condition=(1, 1))
    assert rows[0].composition == "pair-herald"
    assert rows[0].ps_over_p2 == pytest.approx(0.16250507576175685, abs=1e-12)


def test_scan_filter_split_composition():
    rows = jf_length_scan([1.5, 2.5], condition=(0, 0))
    assert [r.composition for r in rows] == ["filter-split", "filter-split"]
    assert rows[0].ps_over_p2 == pytest.approx(0.22910708682504716, abs=1e-12)


def test_scan_filter_split_running_best_approaches_quarter():
    rows = jf_length_scan([k + 0.5 for k in range(25)])
    best = max(r.ps_over_p2 for r in rows)
    assert abs(best - 0.25) < 5e-4
    assert all(r.ps_over_p2 < 0.25 for r in rows)


def test_scan_rejects_impossible_compositions():
    with pytest.raises(ValueError):
        jf_length_scan([1.5], condition=(1, 1))
    with pytest.raises(ValueError):
        jf_length_scan([1.25], condition=(0, 0))


# ---------------------------------------------------------------------------
# sweep spec parsing


def test_sweep_spec_from_mapping_with_ranges():
    spec = SweepSpec.from_mapping(
        {
            "theta1": {"start": 10, "stop": 50, "steps": 5, "unit": "deg"},
            "beta": [0, [0.3, 0.4], "0.1+0.2j"],
            "p": [0.5, 1.0],
        }
    )
    assert len(spec.theta1) == 5
    assert spec.theta1[0] == pytest.approx(math.radians(10))
    assert spec.theta1[-1] == pytest.approx(math.radians(50))
    assert spec.beta == (0j, 0.3 + 0.4j, 0.1 + 0.2j)
    assert spec.p == (0.5, 1.0)


def test_sweep_spec_rejects_unknown_axes():
    with pytest.raises(ValueError):
        SweepSpec.from_mapping({"theta9": [0.1]})


def test_sweep_spec_rejects_empty_axis():
    with pytest.raises(ValueError):
        SweepSpec.from_mapping({"p": []})


def test_sweep_spec_rejects_decreasing_axis():
    with pytest.raises(ValueError):
        SweepSpec.from_mapping({"p": [1.0, 0.5]})


def test_sweep_spec_rejects_deg_on_p_axis():
    with pytest.raises(ValueError):
        SweepSpec.from_mapping({"p": {"start": 0, "stop": 1, "steps": 3, "unit": "deg"}})


def test_sweep_rows_grid_order_and_manifold_snap():
    spec = SweepSpec.from_mapping(
        {
            "theta1": [DEG30, math.pi / 4],
            "beta": [0],
            "p": [0.5, 1.0],
        }
    )
    rows = sweep_rows(spec)
    assert len(rows) == 4
    # theta1-major over p; theta2 snapped to the sum_plus completion
    assert [r["theta1_rad"] for r in rows] == [DEG30, DEG30, math.pi / 4, math.pi / 4]
    assert rows[0]["theta2_rad"] == pytest.approx(math.pi / 2 - DEG30)
    # on the manifold the heralded state is always pure |1>
    for r in rows:
        assert r["fidelity"] == pytest.approx(1.0, abs=1e-12)
        assert r["p_success_over_p2"] == pytest.approx(
            closed_form_ps(0.0, r["theta1_rad"], CaseId.SUM_PLUS), abs=1e-12
        )
    assert rows[-1]["p_success"] == pytest.approx(1.0 / 16.0, abs=1e-12)

import math

import numpy as np
import pytest

from wisebeam import scenario
from wisebeam.scenario import ScenarioError, parse_scenario, serialize_scenario, validate_scenario


def test_defaults_match_reference_experiment():
    s = parse_scenario("")
    assert s.m == 8 and s.n == 64
    assert s.array.spacing_ratio == 0.5
    # 5 degree grid over [-55, -35] keeps five angles
    assert s.angles.desired == (-55.0, -50.0, -45.0, -40.0, -35.0)
    assert s.angles.peak_angle == -45.0
    assert s.mask.mask_level == pytest.approx(0.01 * math.sqrt(64))
    assert s.similarity.delta == pytest.approx(math.sqrt(2))
    assert s.solver.termination_mode == "either"


def test_omitted_gamma_defaults_to_auto_rule():
    s = parse_scenario("m = 4\nn = 16\ngrid_step_deg = 15.0\ntheta_d = [-60.0, -30.0]\ntheta_u = [[-15.0, 90.0]]\n")
    assert s.mask.mask_level == pytest.approx(0.01 * math.sqrt(16))
    assert s.mask.gamma_auto


def test_explicit_gamma_kept():
    s = parse_scenario("gamma = 0.25\n")
    assert s.mask.mask_level == 0.25
    assert not s.mask.gamma_auto


def test_overlapping_angle_sets_rejected():
    with pytest.raises(ScenarioError, match="overlap"):
        parse_scenario("theta_d = [-55.0, -35.0]\ntheta_u = [[-40.0, 90.0]]\n")


def test_unknown_key_rejected():
    with pytest.raises(ScenarioError, match="unknown"):
        parse_scenario("frobnicate = 3\n")


def test_malformed_document_reports_parse_error():
    with pytest.raises(ScenarioError, match="parse error"):
        parse_scenario("m = [unterminated\n")


def test_theta0_defaults_to_sector_center():
    s = parse_scenario("theta_d = [-60.0, -20.0]\ntheta_u = [[0.0, 90.0]]\n")
    assert s.angles.peak_angle == -40.0


def test_validate_flags_delta_out_of_range(desk_scenario):
    bad = desk_scenario.with_delta(1.5)
    violations = validate_scenario(bad)
    assert any("delta" in v for v in violations)


def test_validate_flags_overlapping_stopbands():
    with pytest.raises(ScenarioError, match="stopbands overlap"):
        parse_scenario("stopbands = [[0.3, 0.5], [0.4, 0.6]]\n")


def test_validate_accepts_default_scenario():
    assert validate_scenario(parse_scenario("")) == []


def test_serialize_parse_round_trip(desk_scenario):
    text = serialize_scenario(desk_scenario)
    assert parse_scenario(text) == desk_scenario
    # and the default scenario too
    s = parse_scenario("")
    assert parse_scenario(serialize_scenario(s)) == s


@pytest.mark.parametrize("step,count", [(5.0, 37), (15.0, 13), (1.0, 181), (45.0, 5)])
def test_grid_point_count(step, count):
    grid = scenario.angle_grid(step)
    assert len(grid) == count
    assert grid[0] == -90.0 and grid[-1] == 90.0


def test_random_reference_is_seeded():
    a = parse_scenario('reference = "random:7"\n')
    b = parse_scenario('reference = "random:7"\n')
    c = parse_scenario('reference = "random:8"\n')
    assert np.array_equal(a.similarity.reference, b.similarity.reference)
    assert not np.array_equal(a.similarity.reference, c.similarity.reference)


def test_every_parsed_scenario_validates():
    for doc in ("", "m = 3\nn = 8\n", 'reference = "random:1"\ndelta = 0.5\n'):
        assert validate_scenario(parse_scenario(doc)) == []

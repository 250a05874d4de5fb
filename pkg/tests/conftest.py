"""Shared fixtures.

The compact test scenario uses a 4-element array with length-16 codes on a
15 degree grid, mainlobe [-60, -30] with the peak at -45, two stopbands
covering DFT bins {5, 6, 8, 9}, and gamma = 0.01 sqrt(16) = 0.04.  It is
small enough that a full constrained solve takes about a second, yet every
constraint family is active.

The expensive end-to-end runs (the main solve, the baseline, and the
similarity sweep) are session-scoped so the whole suite pays for them once.
"""

import numpy as np
import pytest

from wisebeam import baselines, scenario, wise

DESK_TOML = """
m = 4
n = 16
grid_step_deg = 15.0
theta_d = [-60.0, -30.0]
theta_u = [[-90.0, -75.0], [-15.0, 90.0]]
theta0 = -45.0
stopbands = [[0.3, 0.35], [0.5, 0.55]]
gamma = "auto"
delta = 1.4142135623730951
eta = 0.1
e1 = 1e-5
e2 = 1e-4
max_iters = 120
termination_mode = "both"
reference = "chirp"
"""

SWEEP_TOML = DESK_TOML.replace('reference = "chirp"', 'reference = "notched-chirp"').replace(
    "max_iters = 120", "max_iters = 180"
)

SWEEP_DELTAS = (np.sqrt(2.0), 0.9, 0.7)


@pytest.fixture(scope="session")
def desk_scenario():
    return scenario.parse_scenario(DESK_TOML)


@pytest.fixture(scope="session")
def desk_run(desk_scenario):
    return wise.run(desk_scenario)


@pytest.fixture(scope="session")
def desk_sdr(desk_scenario):
    return baselines.sdr_round(desk_scenario)


@pytest.fixture(scope="session")
def sweep_runs():
    base = scenario.parse_scenario(SWEEP_TOML)
    return {delta: wise.run(base.with_delta(float(delta))) for delta in SWEEP_DELTAS}


def random_unimodular(rng, m, n):
    return np.exp(2j * np.pi * rng.random((m, n)))

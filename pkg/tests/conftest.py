import math
import sys

sys.path.append(".")

import pytest
from dotenv import load_dotenv

load_dotenv()

from src.model.scenario import Scenario, db_to_linear


def make_reference_scenario(n_alice: int = 4, **changes) -> Scenario:
    """N_E=2, K_B=10 dB, K_E=5 dB, both mean SNRs 10 dB, theta_B=pi/3, theta_E=pi/4, R_S=1."""
    scenario = Scenario(
        n_alice=n_alice,
        n_eve=2,
        k_bob=db_to_linear(10.0),
        k_eve=db_to_linear(5.0),
        mean_snr_bob=db_to_linear(10.0),
        mean_snr_eve=db_to_linear(10.0),
        bob_angle=math.pi / 3.0,
        eve_angle=math.pi / 4.0,
        secrecy_rate=1.0,
    )
    return scenario.replace(**changes) if changes else scenario


@pytest.fixture
def reference_scenario() -> Scenario:
    return make_reference_scenario()


@pytest.fixture
def scenario_factory():
    return make_reference_scenario

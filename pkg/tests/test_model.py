import math
import sys

sys.path.append(".")

import numpy as np
import pytest
from dotenv import load_dotenv

load_dotenv()

from src.model.geometry import (
    CartesianPosition,
    PolarPosition,
    cartesian_to_polar,
    normalize_angle,
    polar_to_cartesian,
)
from src.model.scenario import (
    Geometry,
    LinkBudget,
    Scenario,
    db_to_linear,
    linear_to_db,
    mean_snr_from_geometry,
)
from src.utils.errors import DomainError


def test_normalize_angle_wraps_into_one_turn():
    assert normalize_angle(-math.pi / 2) == pytest.approx(3 * math.pi / 2)
    assert normalize_angle(2 * math.pi) == 0.0
    assert normalize_angle(5 * math.pi) == pytest.approx(math.pi)
    assert 0.0 <= normalize_angle(-1e-18) < 2 * math.pi


def test_polar_cartesian_conversions():
    c = polar_to_cartesian(PolarPosition(2.0, math.pi / 2))
    assert c.x == pytest.approx(0.0, abs=1e-15)
    assert c.y == pytest.approx(2.0)
    p = cartesian_to_polar(CartesianPosition(1000.0, -1000.0))
    assert p.distance == pytest.approx(1000.0 * math.sqrt(2.0))
    assert p.angle == pytest.approx(7 * math.pi / 4)


def test_origin_has_no_angle():
    with pytest.raises(DomainError):
        cartesian_to_polar(CartesianPosition(0.0, 0.0))


def test_negative_distance_rejected():
    with pytest.raises(DomainError):
        PolarPosition(-1.0, 0.0)


def test_db_conversions():
    assert db_to_linear(10.0) == pytest.approx(10.0)
    assert db_to_linear(0.0) == 1.0
    assert np.allclose(db_to_linear(np.array([0.0, 20.0])), [1.0, 100.0])
    assert linear_to_db(100.0) == pytest.approx(20.0)
    with pytest.raises(DomainError):
        linear_to_db(0.0)
    with pytest.raises(DomainError):
        db_to_linear(float("nan"))


def test_calibrated_budget_reproduces_targets():
    budget = LinkBudget.calibrated(4.0, 1414.0, 1500.0, 10.0, 3.0)
    assert mean_snr_from_geometry(budget, 1414.0, "bob") == pytest.approx(10.0)
    assert mean_snr_from_geometry(budget, 1500.0, "eve") == pytest.approx(3.0)
    # doubling the distance costs 2^eta
    assert mean_snr_from_geometry(budget, 3000.0, "eve") == pytest.approx(3.0 / 16.0)


def test_mean_snr_rejects_non_positive_distance():
    budget = LinkBudget(1.0, 4.0, 1e-12, 1e-12)
    with pytest.raises(DomainError):
        mean_snr_from_geometry(budget, 0.0, "bob")
    with pytest.raises(DomainError):
        mean_snr_from_geometry(budget, 10.0, "carol")


def test_scenario_validation():
    with pytest.raises(DomainError):
        Scenario(n_alice=1, n_eve=1, k_bob=1, k_eve=1, mean_snr_bob=1, mean_snr_eve=1, bob_angle=0, eve_angle=1)
    with pytest.raises(DomainError):
        Scenario(n_alice=2, n_eve=1, k_bob=-1, k_eve=1, mean_snr_bob=1, mean_snr_eve=1, bob_angle=0, eve_angle=1)
    with pytest.raises(DomainError):
        Scenario(n_alice=2, n_eve=1, k_bob=1, k_eve=1, mean_snr_bob=0, mean_snr_eve=1, bob_angle=0, eve_angle=1)


def test_scenario_from_geometry_derives_angles_and_snrs():
    alice = CartesianPosition(0.0, 0.0)
    bob = CartesianPosition(1225.0, 707.0)
    eve = CartesianPosition(1000.0, -1000.0)
    budget = LinkBudget.calibrated(4.0, bob.distance_to(alice), eve.distance_to(alice), 10.0, 10.0)
    scenario = Scenario.from_geometry(Geometry(alice, bob, eve, budget), n_alice=4, n_eve=2, k_bob=10.0, k_eve=3.16)
    assert scenario.mode == "link_budget"
    assert scenario.mean_snr_bob == pytest.approx(10.0)
    assert scenario.mean_snr_eve == pytest.approx(10.0)
    assert scenario.bob_angle == pytest.approx(math.atan2(707.0, 1225.0))
    # -pi/4 and pi/4 share a cosine, so the array sees the same direction
    assert math.cos(scenario.eve_angle) == pytest.approx(math.cos(math.pi / 4))


def test_replace_keeps_validation(reference_scenario):
    changed = reference_scenario.replace(n_alice=8)
    assert changed.n_alice == 8
    assert changed.mode == "direct"
    with pytest.raises(DomainError):
        reference_scenario.replace(secrecy_rate=-1.0)


def test_eve_k_factor_must_be_finite(reference_scenario):
    with pytest.raises(DomainError) as info:
        reference_scenario.replace(k_eve=math.inf)
    assert info.value.context["k_eve"] == math.inf
    with pytest.raises(DomainError):
        reference_scenario.replace(k_eve=float("nan"))
    with pytest.raises(DomainError):
        reference_scenario.replace(k_bob=float("nan"))
    # a pure-LOS main channel stays allowed
    assert reference_scenario.replace(k_bob=math.inf).k_bob == math.inf


def test_polar_cartesian_round_trip_on_random_points():
    rng = np.random.default_rng(2016)
    for x, y in rng.uniform(-5000.0, 5000.0, size=(1000, 2)):
        back = polar_to_cartesian(cartesian_to_polar(CartesianPosition(x, y)))
        assert back.x == pytest.approx(x, rel=1e-12, abs=1e-9)
        assert back.y == pytest.approx(y, rel=1e-12, abs=1e-9)


def test_db_sums_become_linear_products():
    rng = np.random.default_rng(7)
    for a, b in rng.uniform(-40.0, 40.0, size=(200, 2)):
        assert db_to_linear(a + b) == pytest.approx(db_to_linear(a) * db_to_linear(b), rel=1e-12)


def test_mean_snr_strictly_decreases_with_distance():
    budget = LinkBudget.calibrated(4.0, 1414.0, 1414.0, 10.0, 10.0)
    distances = np.linspace(1.0, 10_000.0, 500)
    for receiver in ("bob", "eve"):
        assert np.all(np.diff(mean_snr_from_geometry(budget, distances, receiver)) < 0.0)

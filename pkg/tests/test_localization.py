import math
import sys

sys.path.append(".")

import numpy as np
import pytest
from dotenv import load_dotenv

load_dotenv()

from src.localization.tdoa import (
    AnchorSet,
    FisherMatrix,
    LocationCovariance,
    anchor_bearings,
    location_covariance,
    sample_estimated_location,
    sample_estimated_locations,
    tdoa_fisher,
    tdoa_neg_log_likelihood,
)
from src.localization.uncertainty import (
    averaged_outage_curve,
    draw_estimated_locations,
    unknown_location_curve,
)
from src.model.geometry import CartesianPosition
from src.model.scenario import Geometry, LinkBudget, Scenario
from src.montecarlo.rng import RngSpec
from src.optimize.tau_search import average_curve_over_main_channel
from src.utils import config
from src.utils.errors import DegenerateAnchors, DomainError

ORIGIN = CartesianPosition(0.0, 0.0)
THREE_ANCHORS = [CartesianPosition(1000.0, 0.0), CartesianPosition(0.0, 1000.0), CartesianPosition(-1000.0, 0.0)]
TRUE_EVE = CartesianPosition(1000.0, -1000.0)


def _geometry_scenario(n_alice: int = 4) -> Scenario:
    alice = CartesianPosition(0.0, 0.0)
    bob = CartesianPosition(1225.0, 707.0)
    budget = LinkBudget.calibrated(4.0, bob.distance_to(alice), TRUE_EVE.distance_to(alice), 10.0, 10.0)
    return Scenario.from_geometry(Geometry(alice, bob, TRUE_EVE, budget), n_alice=n_alice, n_eve=2,
                                  k_bob=10.0, k_eve=10.0 ** 0.5)


def test_anchor_bearings():
    anchors = AnchorSet.from_range_sigma(THREE_ANCHORS, 10.0)
    assert np.allclose(anchor_bearings(anchors, ORIGIN), [0.0, math.pi / 2, math.pi])
    with pytest.raises(DomainError):
        anchor_bearings(anchors, CartesianPosition(1000.0, 0.0))


def test_anchor_set_validation():
    with pytest.raises(DomainError):
        AnchorSet.from_range_sigma(THREE_ANCHORS[:1], 10.0)
    with pytest.raises(DomainError):
        AnchorSet.from_range_sigma([THREE_ANCHORS[0], THREE_ANCHORS[0], THREE_ANCHORS[1]], 10.0)
    with pytest.raises(DomainError):
        AnchorSet(tuple(THREE_ANCHORS), timing_sigma=-1.0)
    anchors = AnchorSet.from_range_sigma(THREE_ANCHORS, 30.0)
    assert anchors.range_sigma == pytest.approx(30.0)
    assert anchors.with_range_sigma(5.0).range_sigma == pytest.approx(5.0)


def test_three_anchor_fisher_and_covariance():
    s = 10.0
    j = tdoa_fisher(AnchorSet.from_range_sigma(THREE_ANCHORS, s), ORIGIN)
    scale = 1.0 / (2.0 * s ** 2)
    assert j.j11 == pytest.approx(5.0 * scale)
    assert j.j12 == pytest.approx(-scale)
    assert j.j22 == pytest.approx(scale)

    cov = location_covariance(j)
    assert cov.sigma_x == pytest.approx(s / math.sqrt(2.0))
    assert cov.sigma_y == pytest.approx(s * math.sqrt(2.5))
    assert cov.rho == pytest.approx(1.0 / math.sqrt(5.0))
    assert np.allclose(cov.as_matrix() @ j.as_array(), np.eye(2))


def test_covariance_scales_with_timing_accuracy():
    anchors = AnchorSet.ring(TRUE_EVE, 20.0)
    narrow = location_covariance(tdoa_fisher(anchors, TRUE_EVE))
    wide = location_covariance(tdoa_fisher(anchors.with_range_sigma(60.0), TRUE_EVE))
    assert wide.sigma_x == pytest.approx(3.0 * narrow.sigma_x)
    assert wide.sigma_y == pytest.approx(3.0 * narrow.sigma_y)
    assert wide.rho == pytest.approx(narrow.rho, abs=1e-12)


def test_noiseless_fix_has_no_fisher_matrix():
    with pytest.raises(DomainError):
        tdoa_fisher(AnchorSet.from_range_sigma(THREE_ANCHORS, 0.0), ORIGIN)


def test_two_anchors_are_degenerate():
    j = tdoa_fisher(AnchorSet.from_range_sigma(THREE_ANCHORS[:2], 10.0), ORIGIN)
    with pytest.raises(DegenerateAnchors):
        location_covariance(j)


def test_collinear_anchors_behind_each_other_are_degenerate():
    anchors = AnchorSet.from_range_sigma(
        [CartesianPosition(1000.0, 0.0), CartesianPosition(2000.0, 0.0), CartesianPosition(3000.0, 0.0)], 10.0)
    with pytest.raises(DegenerateAnchors):
        location_covariance(tdoa_fisher(anchors, ORIGIN))


def test_correlation_rounding_to_one_is_degenerate():
    # the determinant 2^-52 clears the conditioning guard, but both sigmas round to 2^26
    j = FisherMatrix(j11=1.0, j12=1.0, j22=1.0 + 2.0 ** -52)
    with pytest.raises(DegenerateAnchors) as info:
        location_covariance(j)
    assert info.value.context["determinant"] > 0.0


def test_fisher_depends_only_on_bearings():
    s = 25.0
    near = tdoa_fisher(AnchorSet.from_range_sigma(THREE_ANCHORS, s), TRUE_EVE)
    far_anchors = [CartesianPosition(TRUE_EVE.x + 10.0 * (a.x - TRUE_EVE.x), TRUE_EVE.y + 10.0 * (a.y - TRUE_EVE.y))
                   for a in THREE_ANCHORS]
    far = tdoa_fisher(AnchorSet.from_range_sigma(far_anchors, s), TRUE_EVE)
    assert np.allclose(far.as_array(), near.as_array(), rtol=1e-12, atol=0.0)


def test_neg_log_likelihood():
    c = config.SPEED_OF_LIGHT
    assert tdoa_neg_log_likelihood(100.0 / c, 300.0, 200.0, c, 1e-8) == pytest.approx(0.0)
    assert tdoa_neg_log_likelihood(0.0, 300.0, 200.0, c, 1e-8) > 0.0
    with pytest.raises(DomainError):
        tdoa_neg_log_likelihood(0.0, 1.0, 1.0, c, 0.0)


def test_location_covariance_rejects_invalid_fields():
    with pytest.raises(DomainError):
        LocationCovariance(0.0, 1.0, 0.0)
    with pytest.raises(DomainError):
        LocationCovariance(1.0, 1.0, 1.0)


def test_sampled_locations_match_covariance():
    cov = LocationCovariance(sigma_x=30.0, sigma_y=80.0, rho=-0.4)
    samples = sample_estimated_locations(TRUE_EVE, cov, 200_000, np.random.default_rng(2))
    assert np.allclose(samples.mean(axis=0), [TRUE_EVE.x, TRUE_EVE.y], atol=1.0)
    assert np.allclose(np.cov(samples.T), cov.as_matrix(), rtol=0.03, atol=30.0)
    assert np.corrcoef(samples.T)[0, 1] == pytest.approx(-0.4, abs=0.01)
    single = sample_estimated_location(TRUE_EVE, cov, np.random.default_rng(2))
    assert single.x == pytest.approx(samples[0, 0])


def test_tiny_covariance_returns_the_true_location():
    cov = LocationCovariance(sigma_x=1e-9, sigma_y=1e-9, rho=0.0)
    samples = sample_estimated_locations(TRUE_EVE, cov, 10, np.random.default_rng(0))
    assert np.allclose(samples, [TRUE_EVE.x, TRUE_EVE.y], atol=1e-6)


def test_perfect_fix_draws_the_true_location():
    scenario = _geometry_scenario()
    anchors = AnchorSet.ring(TRUE_EVE, 0.0)
    samples = draw_estimated_locations(scenario, anchors, TRUE_EVE, 5, RngSpec(1, config.STREAM_LOCATION))
    assert np.array_equal(samples, np.tile([TRUE_EVE.x, TRUE_EVE.y], (5, 1)))


def test_estimates_center_on_the_true_location():
    scenario = _geometry_scenario()
    samples = draw_estimated_locations(scenario, AnchorSet.ring(TRUE_EVE, 50.0), TRUE_EVE, 4000,
                                       RngSpec(1, config.STREAM_LOCATION))
    assert samples.shape == (4000, 2)
    assert np.allclose(samples.mean(axis=0), [TRUE_EVE.x, TRUE_EVE.y], atol=5.0)


def test_uncertainty_needs_a_geometry(reference_scenario):
    with pytest.raises(DomainError):
        averaged_outage_curve(reference_scenario, AnchorSet.ring(TRUE_EVE, 10.0), TRUE_EVE, 11, 2, 2,
                              RngSpec(1, config.STREAM_LOCATION))


def test_perfect_fix_single_sample_equals_main_channel_average():
    scenario = _geometry_scenario()
    rng = RngSpec(5, config.STREAM_LOCATION)
    averaged = averaged_outage_curve(scenario, AnchorSet.ring(TRUE_EVE, 0.0), TRUE_EVE, 21, 1, 50, rng)
    reference = average_curve_over_main_channel(scenario, 50, 21, rng)
    assert np.allclose(averaged.outage, reference.outage, atol=1e-12)


def test_fixed_main_channel_with_perfect_fix_has_no_spread():
    scenario = _geometry_scenario()
    curve = averaged_outage_curve(scenario, AnchorSet.ring(TRUE_EVE, 0.0), TRUE_EVE, 11, 3, 20,
                                  RngSpec(5, config.STREAM_LOCATION), fix_main_channel=True)
    assert np.all(curve.std_error == 0.0)


def test_location_error_hurts_when_scored_at_the_true_eve():
    scenario = _geometry_scenario()
    rng = RngSpec(8, config.STREAM_LOCATION)
    anchors = AnchorSet.ring(TRUE_EVE, 0.0)
    perfect = averaged_outage_curve(scenario, anchors, TRUE_EVE, 51, 30, 30, rng,
                                    evaluate_at_true_location=True)
    plain = averaged_outage_curve(scenario, anchors, TRUE_EVE, 51, 30, 30, rng)
    assert np.allclose(perfect.outage, plain.outage, atol=1e-12)
    noisy = averaged_outage_curve(scenario, anchors.with_range_sigma(800.0), TRUE_EVE, 51, 30, 30, rng,
                                  evaluate_at_true_location=True)
    assert noisy.min_outage > perfect.min_outage


def test_unknown_bearing_reference_is_worse_than_a_perfect_fix():
    scenario = _geometry_scenario()
    rng = RngSpec(9, config.STREAM_LOCATION)
    perfect = averaged_outage_curve(scenario, AnchorSet.ring(TRUE_EVE, 0.0), TRUE_EVE, 51, 20, 20, rng)
    unknown = unknown_location_curve(scenario, 51, 20, 20, rng)
    assert unknown.min_outage > perfect.min_outage


def test_uncertainty_does_not_depend_on_workers():
    scenario = _geometry_scenario()
    rng = RngSpec(10, config.STREAM_LOCATION)
    anchors = AnchorSet.ring(TRUE_EVE, 200.0)
    serial = averaged_outage_curve(scenario, anchors, TRUE_EVE, 21, 6, 10, rng, workers=1)
    threaded = averaged_outage_curve(scenario, anchors, TRUE_EVE, 21, 6, 10, rng, workers=3)
    assert np.array_equal(serial.outage, threaded.outage)

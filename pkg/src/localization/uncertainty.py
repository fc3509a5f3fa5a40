"""
📡 Wiretap LBB - Location Uncertainty Averaging
===============================================

Secrecy outage averaged over Alice's uncertainty about where Eve is:

1. draw an estimated Eve location from N(ξ_true, V), V = J⁻¹ of the TDOA fix
2. convert it to (d̂_E, θ̂_E) relative to Alice
3. build the beamformer family toward θ̂_E, recompute γ̂̄_E from d̂_E through the
   link budget and evaluate the closed-form outage at every τ
4. average over location samples and over main-channel draws

Location sample i uses main-channel pool i (pool 0 for every sample when the
main channel is held fixed). Estimates landing on Alice are redrawn from the
same location stream and tallied.
"""

import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from src.channel.steering import alice_steering
from src.localization.tdoa import AnchorSet, location_covariance, sample_estimated_locations, tdoa_fisher
from src.model.geometry import CartesianPosition, cartesian_to_polar
from src.model.scenario import Scenario, mean_snr_from_geometry
from src.montecarlo.rng import RngSpec, map_ordered
from src.optimize.tau_search import TauCurve, main_channel_pool, mean_curve_of_model, pool_model, tau_grid
from src.utils import config
from src.utils.error_monitor import DegeneracyMonitor
from src.utils.errors import DomainError

logger = logging.getLogger(__name__)


def _require_geometry(scenario: Scenario):
    if scenario.geometry is None:
        raise DomainError(
            "location uncertainty needs positions and a link budget",
            context={"mode": scenario.mode},
            suggested_fix="describe the scenario with a [geometry] table",
        )
    return scenario.geometry


def draw_estimated_locations(scenario: Scenario, anchors: AnchorSet, true_eve: CartesianPosition,
                             n_samples: int, rng: RngSpec,
                             monitor: Optional[DegeneracyMonitor] = None) -> np.ndarray:
    """Estimated Eve positions, shape (n_samples, 2); a zero timing sigma returns true_eve everywhere."""
    if n_samples < 1:
        raise DomainError(f"n_location_samples must be >= 1, got {n_samples}")
    alice = _require_geometry(scenario).alice
    if anchors.timing_sigma == 0.0:
        return np.tile([true_eve.x, true_eve.y], (n_samples, 1))

    cov = location_covariance(tdoa_fisher(anchors, true_eve))
    logger.debug(f"location covariance: sigma_x={cov.sigma_x:.4g} m, sigma_y={cov.sigma_y:.4g} m, rho={cov.rho:.4f}")
    generator = rng.with_stream(config.STREAM_LOCATION).generator(0)
    samples = sample_estimated_locations(true_eve, cov, n_samples, generator)

    origin = np.array([alice.x, alice.y])
    resampled = 0
    while True:
        collided = np.flatnonzero(np.hypot(*(samples - origin).T) < config.ALICE_COLLISION_RADIUS_M)
        if collided.size == 0:
            break
        resampled += collided.size
        samples[collided] = sample_estimated_locations(true_eve, cov, collided.size, generator)
        if resampled > n_samples:
            break
    if monitor is not None:
        monitor.record("estimate_on_alice", attempts=n_samples, skipped=resampled,
                       example=f"{resampled} estimates within {config.ALICE_COLLISION_RADIUS_M} m of Alice")
    return samples


def _sample_curve(scenario: Scenario, estimate: np.ndarray, pool: np.ndarray, taus: np.ndarray,
                  g_true: np.ndarray, evaluate_at_true_location: bool) -> Tuple[np.ndarray, int]:
    geometry = scenario.geometry
    polar = cartesian_to_polar(CartesianPosition(float(estimate[0]), float(estimate[1])).offset_from(geometry.alice))
    g_hat = alice_steering(polar.angle, scenario.n_alice, scenario.spacing_alice)
    if evaluate_at_true_location:
        g_eval, snr_eve = g_true, scenario.mean_snr_eve
    else:
        g_eval = g_hat
        snr_eve = float(mean_snr_from_geometry(geometry.budget, polar.distance, "eve"))
    monitor = DegeneracyMonitor({"degenerate_main_channel": 1.0})
    model = pool_model(scenario, pool, monitor, g_design=g_hat, g_eval=g_eval, mean_snr_eve=snr_eve)
    skipped = monitor.categories["degenerate_main_channel"].skipped
    if model.rows == 0:
        return np.full(taus.size, np.nan), skipped
    mean, _ = mean_curve_of_model(model, taus)
    return mean, skipped


def _average_samples(curves: List[np.ndarray], taus: np.ndarray) -> TauCurve:
    values = np.array([c for c in curves if not np.isnan(c).any()])
    if values.shape[0] == 0:
        raise DomainError("every location sample met a degenerate main-channel pool")
    mean = values.mean(axis=0)
    if values.shape[0] > 1:
        std_error = values.std(axis=0, ddof=1) / math.sqrt(values.shape[0])
    else:
        std_error = np.zeros(taus.size)
    return TauCurve.from_values(taus, mean, std_error)


def averaged_outage_curve(scenario: Scenario, anchors: AnchorSet, true_eve: CartesianPosition,
                          grid_size: int, n_location_samples: int, n_channel_realizations: int,
                          rng: RngSpec, fix_main_channel: bool = False,
                          evaluate_at_true_location: bool = False, workers: int = 1) -> TauCurve:
    """Outage versus τ averaged over estimated Eve locations and main-channel draws.

    With ``evaluate_at_true_location`` the estimate-built beamformer is scored
    against the true Eve direction and mean SNR instead of the estimated ones.
    """
    _require_geometry(scenario)
    taus = tau_grid(grid_size)
    monitor = DegeneracyMonitor({
        "degenerate_main_channel": config.MAX_DEGENERATE_FRACTION,
        "estimate_on_alice": config.MAX_ALICE_COLLISION_FRACTION,
    })
    estimates = draw_estimated_locations(scenario, anchors, true_eve, n_location_samples, rng, monitor)
    monitor.check()

    g_true = alice_steering(scenario.eve_angle, scenario.n_alice, scenario.spacing_alice)
    fixed_pool = main_channel_pool(scenario, n_channel_realizations, rng) if fix_main_channel else None

    def run_sample(index: int) -> Tuple[np.ndarray, int]:
        pool = fixed_pool if fixed_pool is not None else main_channel_pool(
            scenario, n_channel_realizations, rng, pool_index=index)
        return _sample_curve(scenario, estimates[index], pool, taus, g_true, evaluate_at_true_location)

    results = map_ordered(run_sample, list(range(n_location_samples)), workers)
    skipped = sum(s for _, s in results)
    monitor.record("degenerate_main_channel", attempts=n_location_samples * n_channel_realizations,
                   skipped=skipped, example=f"{skipped} degenerate draws")
    monitor.check()
    curve = _average_samples([c for c, _ in results], taus)
    logger.info(
        f"📍 c·sigma_t={anchors.range_sigma:g} m: min averaged SOP {curve.min_outage:.6g} "
        f"at tau={curve.argmin_tau:.4f} ({n_location_samples} locations x {n_channel_realizations} draws)"
    )
    return curve


def unknown_location_curve(scenario: Scenario, grid_size: int, n_bearing_samples: int,
                           n_channel_realizations: int, rng: RngSpec, workers: int = 1) -> TauCurve:
    """Reference curve for a beamformer steered at a uniformly random bearing.

    The design direction carries no information about Eve; each design is
    scored against the true Eve direction and mean SNR.
    """
    if n_bearing_samples < 1:
        raise DomainError(f"n_bearing_samples must be >= 1, got {n_bearing_samples}")
    taus = tau_grid(grid_size)
    bearings = rng.with_stream(config.STREAM_UNKNOWN_BEARING).generator(0).uniform(
        0.0, 2.0 * math.pi, n_bearing_samples)
    g_true = alice_steering(scenario.eve_angle, scenario.n_alice, scenario.spacing_alice)

    def run_bearing(index: int) -> Tuple[np.ndarray, int]:
        pool = main_channel_pool(scenario, n_channel_realizations, rng, pool_index=index)
        g_design = alice_steering(float(bearings[index]), scenario.n_alice, scenario.spacing_alice)
        monitor = DegeneracyMonitor({"degenerate_main_channel": 1.0})
        model = pool_model(scenario, pool, monitor, g_design=g_design, g_eval=g_true)
        if model.rows == 0:
            return np.full(taus.size, np.nan), n_channel_realizations
        return mean_curve_of_model(model, taus)[0], monitor.categories["degenerate_main_channel"].skipped

    results = map_ordered(run_bearing, list(range(n_bearing_samples)), workers)
    return _average_samples([c for c, _ in results], taus)

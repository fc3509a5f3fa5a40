"""
📡 Wiretap LBB - Monte Carlo Oracles
====================================

Empirical counterparts of the closed-form results: secrecy outage by direct
simulation of G, the empirical CDF of Eve's SNR, the invariance of the outage
in Eve's angle of arrival, and a chi-square sanity check between substreams.

Trial i draws its G from block i // MC_BLOCK_SIZE of the Eve-channel stream.
With a pool of R main-channel draws, trial i pairs with pool row i % R, so
the tally estimates the pool-averaged outage.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

import numpy as np
from scipy import stats as sps

from src.channel.fading import MainChannel, sample_eve_channels
from src.model.scenario import Scenario
from src.montecarlo.rng import RngSpec, block_layout, map_ordered
from src.secrecy.outage import outage_threshold
from src.utils import config
from src.utils.errors import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EmpiricalEstimate:
    value: float
    std_error: float
    n_trials: int

    @classmethod
    def from_count(cls, successes: int, n_trials: int) -> "EmpiricalEstimate":
        value = successes / n_trials
        return cls(value=value, std_error=math.sqrt(value * (1.0 - value) / n_trials), n_trials=n_trials)

    def agrees_with(self, expected: float, floor: float = 0.015, sigmas: float = 3.0) -> bool:
        return abs(self.value - expected) <= max(sigmas * self.std_error, floor)


@dataclass(frozen=True)
class PhiInvarianceResult:
    phi_values: List[float]
    estimates: List[EmpiricalEstimate]
    max_difference: float
    combined_std_error: float  # of the pair with the largest difference

    @property
    def within_noise(self) -> bool:
        return self.max_difference <= 3.0 * self.combined_std_error


def _as_rows(values: Union[MainChannel, np.ndarray]) -> np.ndarray:
    array = values.h if isinstance(values, MainChannel) else np.asarray(values)
    return np.atleast_2d(array)


def _eve_snr_block(scenario: Scenario, w_rows: np.ndarray, rows: np.ndarray, size: int,
                   generator: np.random.Generator, eve_aoa: Optional[float]) -> np.ndarray:
    g = sample_eve_channels(scenario, size, generator, eve_aoa)
    received = np.einsum("tek,tk->te", g, w_rows[rows])
    return scenario.mean_snr_eve * np.sum(np.abs(received) ** 2, axis=1)


def outage_outcomes(scenario: Scenario, h: Union[MainChannel, np.ndarray], w: np.ndarray, n_trials: int,
                    rng: RngSpec, workers: int = 1, eve_aoa: Optional[float] = None,
                    stream_id: int = config.STREAM_EVE_CHANNEL) -> np.ndarray:
    """Per-trial outage indicator γ_E > 2^(−R_S)(1+γ_B) − 1, as a bool array of length n_trials.

    ``h`` and ``w`` may be single vectors or pools of rows (one beamformer per main-channel draw).
    """
    h_rows = _as_rows(h)
    w_rows = _as_rows(w)
    if w_rows.shape[0] == 1 and h_rows.shape[0] > 1:
        w_rows = np.repeat(w_rows, h_rows.shape[0], axis=0)
    if w_rows.shape != h_rows.shape:
        raise DomainError("h and w pools must have matching shapes",
                          context={"h": h_rows.shape, "w": w_rows.shape})
    thresholds = outage_threshold(scenario.mean_snr_bob * np.abs(np.sum(h_rows * w_rows, axis=1)) ** 2,
                                  scenario.secrecy_rate)
    stream = rng.with_stream(stream_id)
    pool_size = h_rows.shape[0]

    def run_block(index: int, size: int) -> np.ndarray:
        rows = (index * config.MC_BLOCK_SIZE + np.arange(size)) % pool_size
        gamma_eve = _eve_snr_block(scenario, w_rows, rows, size, stream.generator(index), eve_aoa)
        return (thresholds[rows] <= 0.0) | (gamma_eve > thresholds[rows])

    return np.concatenate(map_ordered(run_block, block_layout(n_trials), workers))


def empirical_outage(scenario: Scenario, h: Union[MainChannel, np.ndarray], w: np.ndarray, n_trials: int,
                     rng: RngSpec, workers: int = 1, eve_aoa: Optional[float] = None) -> EmpiricalEstimate:
    """Monte Carlo secrecy outage for beamformer w over independent draws of G."""
    h_rows = _as_rows(h)
    w_rows = _as_rows(w)
    if h_rows.shape[0] == 1:
        gamma_bob = scenario.mean_snr_bob * abs(np.dot(h_rows[0], w_rows[0])) ** 2
        if outage_threshold(gamma_bob, scenario.secrecy_rate) <= 0.0:
            return EmpiricalEstimate(value=1.0, std_error=0.0, n_trials=n_trials)
    outcomes = outage_outcomes(scenario, h_rows, w_rows, n_trials, rng, workers, eve_aoa)
    return EmpiricalEstimate.from_count(int(np.count_nonzero(outcomes)), n_trials)


def empirical_eve_cdf(scenario: Scenario, w: np.ndarray, grid: Sequence[float], n_trials: int,
                      rng: RngSpec, workers: int = 1) -> np.ndarray:
    """Empirical P(γ_E ≤ x) at every grid point."""
    grid = np.asarray(grid, dtype=float)
    if np.any(np.diff(grid) < 0.0):
        raise DomainError("CDF grid must be sorted ascending")
    w_rows = _as_rows(w)
    stream = rng.with_stream(config.STREAM_EVE_CDF)
    rows = np.zeros(config.MC_BLOCK_SIZE, dtype=int)

    def run_block(index: int, size: int) -> np.ndarray:
        return _eve_snr_block(scenario, w_rows, rows[:size], size, stream.generator(index), None)

    samples = np.sort(np.concatenate(map_ordered(run_block, block_layout(n_trials), workers)))
    return np.searchsorted(samples, grid, side="right") / n_trials


def phi_invariance_check(scenario: Scenario, h: Union[MainChannel, np.ndarray], w: np.ndarray,
                         phi_values: Sequence[float], n_trials: int, rng: RngSpec,
                         workers: int = 1) -> PhiInvarianceResult:
    """Empirical outage for each Eve angle of arrival on identical scattering draws."""
    if len(phi_values) < 2:
        raise DomainError("phi invariance needs at least two angles")
    estimates = [empirical_outage(scenario, h, w, n_trials, rng, workers, eve_aoa=phi) for phi in phi_values]
    max_difference = 0.0
    combined = 0.0
    for first, second in itertools.combinations(estimates, 2):
        difference = abs(first.value - second.value)
        if difference >= max_difference:
            max_difference = difference
            combined = math.hypot(first.std_error, second.std_error)
    logger.debug(f"phi invariance: max |dSOP| = {max_difference:.3g} (combined SE {combined:.3g})")
    return PhiInvarianceResult(list(phi_values), estimates, max_difference, combined)


def independence_p_value(first: np.ndarray, second: np.ndarray) -> float:
    """Chi-square test of independence between two paired Bernoulli sequences."""
    first = np.asarray(first, dtype=bool)
    second = np.asarray(second, dtype=bool)
    if first.shape != second.shape:
        raise DomainError("paired outcomes must have equal length")
    table = np.array([
        [np.count_nonzero(first & second), np.count_nonzero(first & ~second)],
        [np.count_nonzero(~first & second), np.count_nonzero(~first & ~second)],
    ])
    if np.any(table.sum(axis=0) == 0) or np.any(table.sum(axis=1) == 0):
        return 1.0
    return float(sps.chi2_contingency(table)[1])

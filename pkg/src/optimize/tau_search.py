"""
📡 Wiretap LBB - Optimal Tau Search
===================================

Finds τ* = argmin P_out over τ ∈ [0, 1], sweeps whole curves, averages them
over main-channel draws, and checks family optimality against a brute-force
random search over the complex unit sphere.

Unimodality in τ is observed but not proved, so every search scans a global
coarse grid first and uses golden-section steps only inside the two grid cells
around the best grid point. Ties on the grid go to the smallest τ; refinement
replaces the grid point only on a strict improvement.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple, Union

import numpy as np

from src.beamforming.family import (
    build_family,
    build_family_batch,
    mrt_beamformer,
)
from src.channel.fading import MainChannel, complex_gaussian, eve_los_direction, sample_main_channels
from src.model.scenario import Scenario
from src.montecarlo.rng import RngSpec, map_ordered
from src.optimize.surface import FamilyOutageModel
from src.secrecy.outage import outage_probability_array, stats_from_leakage
from src.utils import config
from src.utils.error_monitor import DegeneracyMonitor
from src.utils.errors import DegenerateGeometry, DomainError

logger = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_ROW_CHUNK = 256
_ORACLE_CHUNK = 1 << 14


@dataclass(frozen=True)
class TauCurve:
    taus: np.ndarray
    outage: np.ndarray
    argmin_tau: float
    min_outage: float
    std_error: Optional[np.ndarray] = None

    @classmethod
    def from_values(cls, taus: np.ndarray, outage: np.ndarray,
                    std_error: Optional[np.ndarray] = None) -> "TauCurve":
        index = int(np.argmin(outage))  # first occurrence: smallest τ wins ties
        return cls(taus=taus, outage=outage, argmin_tau=float(taus[index]),
                   min_outage=float(outage[index]), std_error=std_error)


def tau_grid(grid_size: int) -> np.ndarray:
    if int(grid_size) != grid_size or grid_size < 2:
        raise DomainError(f"grid_size must be an integer >= 2, got {grid_size}")
    return np.linspace(0.0, 1.0, int(grid_size))


def minimize_rows(grid_fn: Callable[[np.ndarray], np.ndarray],
                  point_fn: Callable[[np.ndarray], np.ndarray],
                  coarse_grid: int, refine_iters: int) -> Tuple[np.ndarray, np.ndarray]:
    """Grid scan plus golden-section refinement, independently for every row.

    ``grid_fn(taus)`` returns shape (R, T); ``point_fn(x)`` evaluates row r at x[r].
    Returns (tau_star, min_value), both shape (R,).
    """
    taus = tau_grid(coarse_grid)
    values = grid_fn(taus)
    index = np.argmin(values, axis=1)
    rows = np.arange(values.shape[0])
    best_x = taus[index]
    best_f = values[rows, index]

    lo = taus[np.maximum(index - 1, 0)]
    hi = taus[np.minimum(index + 1, taus.size - 1)]
    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1 = point_fn(x1)
    f2 = point_fn(x2)

    def keep_better(x, f):
        better = f < best_f
        best_x[better] = x[better]
        best_f[better] = f[better]

    for _ in range(refine_iters):
        keep_better(x1, f1)
        keep_better(x2, f2)
        left = f1 < f2
        hi = np.where(left, x2, hi)
        lo = np.where(left, lo, x1)
        new_x = np.where(left, hi - INV_PHI * (hi - lo), lo + INV_PHI * (hi - lo))
        new_f = point_fn(new_x)
        x1, x2, f1, f2 = (
            np.where(left, new_x, x2),
            np.where(left, x1, new_x),
            np.where(left, new_f, f2),
            np.where(left, f1, new_f),
        )
    keep_better(x1, f1)
    keep_better(x2, f2)
    return best_x, best_f


def _single_model(scenario: Scenario, h: Union[MainChannel, np.ndarray]) -> FamilyOutageModel:
    g_o = eve_los_direction(scenario)
    family = build_family(h, g_o)
    return FamilyOutageModel.from_family(family, g_o, scenario)


def _mrt_curve(scenario: Scenario, h: Union[MainChannel, np.ndarray], taus: np.ndarray) -> TauCurve:
    w = mrt_beamformer(h)
    h_vec = h.h if isinstance(h, MainChannel) else np.asarray(h)
    gamma_bob = scenario.mean_snr_bob * abs(np.dot(h_vec, w)) ** 2
    leakage = abs(np.dot(eve_los_direction(scenario), w)) ** 2
    stats = stats_from_leakage(leakage, scenario.k_eve, scenario.mean_snr_eve, scenario.n_eve)
    value = float(outage_probability_array(gamma_bob, scenario.secrecy_rate, stats))
    return TauCurve.from_values(taus, np.full(taus.shape, value))


def sweep_tau(scenario: Scenario, h: Union[MainChannel, np.ndarray], grid_size: int,
              mrt_fallback: bool = False) -> TauCurve:
    taus = tau_grid(grid_size)
    try:
        model = _single_model(scenario, h)
    except DegenerateGeometry as error:
        if not mrt_fallback:
            raise
        logger.warning(f"⚠️ degenerate main channel ({error.component}); using MRT for every tau")
        return _mrt_curve(scenario, h, taus)
    return TauCurve.from_values(taus, model.grid(taus)[0])


def optimal_tau(scenario: Scenario, h: Union[MainChannel, np.ndarray],
                coarse_grid: int = config.DEFAULT_COARSE_GRID,
                refine_iters: int = config.DEFAULT_REFINE_ITERS) -> Tuple[float, float]:
    model = _single_model(scenario, h)
    tau_star, value = minimize_rows(model.grid, model.pointwise, coarse_grid, refine_iters)
    return float(tau_star[0]), float(value[0])


def optimal_tau_of_model(model: FamilyOutageModel, coarse_grid: int = config.DEFAULT_COARSE_GRID,
                         refine_iters: int = config.DEFAULT_REFINE_ITERS) -> Tuple[np.ndarray, np.ndarray]:
    """Per-row optimum for every main-channel draw held by ``model``."""
    return minimize_rows(model.grid, model.pointwise, coarse_grid, refine_iters)


def optimal_tau_of_average(model: FamilyOutageModel, coarse_grid: int = config.DEFAULT_COARSE_GRID,
                           refine_iters: int = config.DEFAULT_REFINE_ITERS) -> Tuple[float, float]:
    """Optimum of the curve averaged over the rows of ``model``."""
    tau_star, value = minimize_rows(
        lambda taus: model.grid(taus).mean(axis=0)[None, :],
        lambda x: np.array([model.grid(x).mean()]),
        coarse_grid, refine_iters,
    )
    return float(tau_star[0]), float(value[0])


def random_search_oracle(scenario: Scenario, h: Union[MainChannel, np.ndarray], n_samples: int,
                         rng: np.random.Generator, candidates: Optional[np.ndarray] = None) -> float:
    """Minimum analytic outage over unit-norm beamformers drawn uniformly on the complex sphere.

    ``candidates`` (rows of unit vectors) replaces the random draws when given.
    """
    h_vec = h.h if isinstance(h, MainChannel) else np.asarray(h)
    g_o = eve_los_direction(scenario)

    def chunk_minimum(w: np.ndarray) -> float:
        gamma_bob = scenario.mean_snr_bob * np.abs(w @ h_vec) ** 2
        stats = stats_from_leakage(np.abs(w @ g_o) ** 2, scenario.k_eve, scenario.mean_snr_eve, scenario.n_eve)
        return float(np.min(outage_probability_array(gamma_bob, scenario.secrecy_rate, stats)))

    if candidates is not None:
        return chunk_minimum(np.atleast_2d(candidates))
    if n_samples < 1:
        raise DomainError(f"n_samples must be >= 1, got {n_samples}")
    best = 1.0
    remaining = n_samples
    while remaining > 0:
        size = min(_ORACLE_CHUNK, remaining)
        w = complex_gaussian(rng, (size, scenario.n_alice))
        w /= np.linalg.norm(w, axis=1, keepdims=True)
        best = min(best, chunk_minimum(w))
        remaining -= size
    return best


def main_channel_pool(scenario: Scenario, count: int, rng: RngSpec, pool_index: int = 0) -> np.ndarray:
    """``count`` main-channel draws from the main-channel stream, shape (count, N_A)."""
    if count < 1:
        raise DomainError(f"n_realizations must be >= 1, got {count}")
    generator = rng.with_stream(config.STREAM_MAIN_CHANNEL).generator(pool_index)
    return sample_main_channels(scenario, count, generator)


def pool_model(scenario: Scenario, pool: np.ndarray, monitor: Optional[DegeneracyMonitor] = None,
               g_design: Optional[np.ndarray] = None, g_eval: Optional[np.ndarray] = None,
               mean_snr_eve=None) -> FamilyOutageModel:
    """Family model for a pool of draws; degenerate draws are skipped and tallied."""
    g_design = eve_los_direction(scenario) if g_design is None else g_design
    g_eval = g_design if g_eval is None else g_eval
    batch = build_family_batch(pool, g_design)
    skipped = int(np.count_nonzero(~batch.valid))
    if monitor is not None:
        monitor.record("degenerate_main_channel", attempts=batch.valid.size, skipped=skipped,
                       example=f"{skipped} of {batch.valid.size} draws")
    return FamilyOutageModel.from_batch(batch, g_eval, scenario, mean_snr_eve)


def mean_curve_of_model(model: FamilyOutageModel, taus: np.ndarray,
                        workers: int = 1) -> Tuple[np.ndarray, np.ndarray]:
    """(mean, standard error of the mean) over rows, computed in fixed row chunks."""
    chunks = [slice(start, min(start + _ROW_CHUNK, model.rows)) for start in range(0, model.rows, _ROW_CHUNK)]

    def chunk_sums(rows: slice) -> Tuple[np.ndarray, np.ndarray]:
        values = model.subset(rows).grid(taus)
        return values.sum(axis=0), (values ** 2).sum(axis=0)

    partials = map_ordered(chunk_sums, chunks, workers)
    total = np.zeros(taus.size)
    total_sq = np.zeros(taus.size)
    for part_sum, part_sq in partials:
        total += part_sum
        total_sq += part_sq
    n = model.rows
    mean = total / n
    if n > 1:
        variance = np.maximum(total_sq / n - mean ** 2, 0.0) * n / (n - 1)
        std_error = np.sqrt(variance / n)
    else:
        std_error = np.zeros(taus.size)
    return mean, std_error


def average_curve_over_main_channel(scenario: Scenario, n_realizations: int, grid_size: int,
                                    rng: RngSpec, workers: int = 1) -> TauCurve:
    taus = tau_grid(grid_size)
    pool = main_channel_pool(scenario, n_realizations, rng)
    monitor = DegeneracyMonitor({"degenerate_main_channel": config.MAX_DEGENERATE_FRACTION})
    model = pool_model(scenario, pool, monitor)
    monitor.check()
    if model.rows == 0:
        raise DegenerateGeometry("zf", 0.0, 0.0)
    mean, std_error = mean_curve_of_model(model, taus, workers)
    logger.debug(f"averaged curve over {model.rows} draws (N_A={scenario.n_alice})")
    return TauCurve.from_values(taus, mean, std_error)

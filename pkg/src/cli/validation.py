"""
📡 Wiretap LBB - Validation Suite
=================================

Structural invariants, special-function spot values, the closed-form outage
against Monte Carlo, the Eve CDF, angle-of-arrival invariance, family
optimality against random search and the three-anchor Fisher example.
Every check records observed and expected values so a failure names what
broke and by how much.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, List

import numpy as np

from src.beamforming.family import build_family, combine, eve_los_projectors, los_leakage
from src.channel.fading import complex_gaussian, eve_los_direction, sample_main_channel
from src.localization.tdoa import AnchorSet, location_covariance, tdoa_fisher
from src.model.geometry import CartesianPosition
from src.model.scenario import Scenario
from src.montecarlo.oracles import empirical_eve_cdf, empirical_outage, phi_invariance_check
from src.montecarlo.rng import RngSpec
from src.optimize.tau_search import optimal_tau, random_search_oracle
from src.secrecy.outage import (
    EffectiveEveStats,
    OutageQuery,
    effective_eve_stats,
    eve_snr_cdf,
    outage_probability,
)
from src.secrecy.special import gamma_function, regularized_lower_gamma
from src.utils import config
from src.utils.errors import DegenerateGeometry

logger = logging.getLogger(__name__)

ScenarioFactory = Callable[[int], Scenario]


@dataclass
class CheckResult:
    name: str
    passed: bool
    observed: float
    expected: float
    tolerance: float
    detail: str = ""


def _check(name: str, observed: float, expected: float, tolerance: float, detail: str = "") -> CheckResult:
    passed = bool(abs(observed - expected) <= tolerance)
    if not passed and not detail:
        detail = f"observed {observed:.10g}, expected {expected:.10g} within {tolerance:.3g}"
    return CheckResult(name, passed, float(observed), float(expected), float(tolerance), detail)


def _bound(name: str, observed: float, limit: float, detail: str = "") -> CheckResult:
    """observed <= limit."""
    passed = bool(observed <= limit)
    if not passed and not detail:
        detail = f"observed {observed:.10g} exceeds {limit:.10g}"
    return CheckResult(name, passed, float(observed), float(limit), 0.0, detail)


def structural_checks(n_configs: int, rng: np.random.Generator) -> List[CheckResult]:
    """Projector and family invariants over random arrays, angles and channels."""
    worst = {"projector": 0.0, "zf_null": 0.0, "leakage": 0.0, "norm": 0.0, "bob_gain": 0.0}
    for _ in range(n_configs):
        n_alice = int(rng.integers(2, 9))
        g_o = np.exp(1j * 2.0 * math.pi * 0.5 * np.arange(n_alice) * math.cos(rng.uniform(0.0, 2.0 * math.pi)))
        h = complex_gaussian(rng, n_alice)
        pair = eve_los_projectors(g_o)
        worst["projector"] = max(
            worst["projector"],
            float(np.max(np.abs(pair.onto_eve_los @ pair.onto_eve_los - pair.onto_eve_los))),
            float(np.max(np.abs(pair.onto_eve_los @ pair.onto_complement))),
        )
        try:
            family = build_family(h, g_o)
        except DegenerateGeometry:
            continue
        worst["zf_null"] = max(worst["zf_null"], abs(complex(g_o @ family.w_zf)))
        taus = np.linspace(0.0, 1.0, 11)
        for tau in taus:
            w = combine(family, tau)
            worst["leakage"] = max(worst["leakage"], abs(float(los_leakage(g_o, w)) - (1.0 - tau) * n_alice))
            worst["norm"] = max(worst["norm"], abs(float(np.linalg.norm(w)) - 1.0))
        # the best τ is a²/‖h‖², where |h·w|² reaches ‖h‖²
        w_best = combine(family, family.a ** 2 / (family.a ** 2 + family.b ** 2))
        worst["bob_gain"] = max(worst["bob_gain"],
                                abs(abs(complex(h @ w_best)) ** 2 - float(np.linalg.norm(h)) ** 2))
    return [
        _bound("projector idempotence and complementarity", worst["projector"], 1e-10),
        _bound("zero-forcing null toward Eve LOS", worst["zf_null"], 1e-10),
        _bound("LOS leakage equals (1-tau)*N_A", worst["leakage"], 1e-10),
        _bound("beamformer unit norm", worst["norm"], 1e-12),
        _bound("max_tau Bob gain equals channel energy", worst["bob_gain"], 1e-10),
    ]


def special_function_checks() -> List[CheckResult]:
    grid = np.linspace(0.0, 20.0, 1000)
    monotone = all(
        np.all(np.diff([regularized_lower_gamma(a, x) for x in grid]) >= 0.0) for a in (0.5, 1.37, 2.0, 7.3)
    )
    return [
        _check("P(1, 1)", regularized_lower_gamma(1.0, 1.0), 1.0 - math.exp(-1.0), 1e-9),
        _check("P(2, 1.8730)", regularized_lower_gamma(2.0, 1.8730),
               1.0 - math.exp(-1.8730) * (1.0 + 1.8730), 1e-6),
        _check("Gamma(0.5)", gamma_function(0.5), math.sqrt(math.pi), 1e-10),
        CheckResult("P(a, x) monotone in x", monotone, float(monotone), 1.0, 0.0,
                    "" if monotone else "regularized lower gamma decreased on the test grid"),
    ]


def worked_outage_checks() -> List[CheckResult]:
    stats = EffectiveEveStats(k_hat=0.0, m_hat=1.0, mean_snr_hat=2.40250, n_eve=2)
    x = 4.5 / 2.40250
    return [
        _check("worked outage value", outage_probability(OutageQuery(10.0, 1.0), stats),
               math.exp(-x) * (1.0 + x), 1e-5),
        _check("threshold clamp gives certain outage", outage_probability(OutageQuery(0.5, 1.0), stats), 1.0, 0.0),
    ]


def monte_carlo_checks(make_scenario: ScenarioFactory, n_alice_values: List[int], taus: List[float],
                       n_trials: int, rng: RngSpec, workers: int) -> List[CheckResult]:
    """Closed form against simulation on one seeded main-channel draw per array size."""
    checks = []
    for n_alice in n_alice_values:
        scenario = make_scenario(n_alice)
        g_o = eve_los_direction(scenario)
        h = sample_main_channel(scenario, rng.with_stream(config.STREAM_VALIDATION).generator(n_alice))
        family = build_family(h, g_o)
        for tau in taus:
            w = combine(family, tau)
            stats = effective_eve_stats(g_o, w, scenario.k_eve, scenario.mean_snr_eve, scenario.n_eve)
            gamma_bob = scenario.mean_snr_bob * abs(complex(h.h @ w)) ** 2
            analytic = outage_probability(OutageQuery(gamma_bob, scenario.secrecy_rate), stats)
            estimate = empirical_outage(scenario, h, w, n_trials, rng, workers)
            tolerance = max(3.0 * estimate.std_error, 0.015)
            checks.append(_check(f"analytic vs empirical SOP, N_A={n_alice}, tau={tau:g}",
                                 estimate.value, analytic, tolerance))

        w_half = combine(family, 0.5)
        stats = effective_eve_stats(g_o, w_half, scenario.k_eve, scenario.mean_snr_eve, scenario.n_eve)
        grid = np.linspace(0.0, 4.0 * scenario.mean_snr_eve, 200)
        empirical = empirical_eve_cdf(scenario, w_half, grid, n_trials, rng, workers)
        analytic_cdf = np.array([eve_snr_cdf(x, stats) for x in grid])
        # approximation floor or the 99% Kolmogorov band, whichever is wider
        checks.append(_bound(f"Eve SNR CDF sup-distance, N_A={n_alice}, tau=0.5",
                             float(np.max(np.abs(empirical - analytic_cdf))),
                             max(config.EVE_CDF_APPROXIMATION_FLOOR, 1.63 / math.sqrt(n_trials))))

        phis = [0.0, math.pi / 4.0, math.pi / 2.0, math.pi]
        result = phi_invariance_check(scenario, h, w_half, phis, n_trials, rng, workers)
        checks.append(_bound(f"Eve angle-of-arrival invariance, N_A={n_alice}",
                             result.max_difference, 3.0 * result.combined_std_error))
    return checks


def optimality_checks(make_scenario: ScenarioFactory, n_draws: int, n_samples: int,
                      rng: RngSpec) -> List[CheckResult]:
    """Random search over the unit sphere never beats the family optimum by more than 1e-3."""
    checks = []
    for n_alice in (2, 3):
        scenario = make_scenario(n_alice)
        worst_gap = -math.inf
        for draw in range(n_draws):
            h = sample_main_channel(scenario, rng.with_stream(config.STREAM_ORACLE).generator(n_alice, draw, 0))
            _, family_min = optimal_tau(scenario, h)
            oracle_min = random_search_oracle(scenario, h, n_samples,
                                              rng.with_stream(config.STREAM_ORACLE).generator(n_alice, draw, 1))
            worst_gap = max(worst_gap, family_min - oracle_min)
        checks.append(_bound(f"family optimality vs random search, N_A={n_alice}", worst_gap, 1e-3))
    return checks


def fisher_checks() -> List[CheckResult]:
    s = 10.0
    anchors = AnchorSet.from_range_sigma(
        [CartesianPosition(1000.0, 0.0), CartesianPosition(0.0, 1000.0), CartesianPosition(-1000.0, 0.0)], s)
    j = tdoa_fisher(anchors, CartesianPosition(0.0, 0.0))
    cov = location_covariance(j)
    scale = 1.0 / (2.0 * s ** 2)
    return [
        _check("Fisher J11 (three anchors)", j.j11, 5.0 * scale, 1e-12 * 5.0 * scale),
        _check("Fisher J12 (three anchors)", j.j12, -scale, 1e-12 * scale),
        _check("Fisher J22 (three anchors)", j.j22, scale, 1e-12 * scale),
        _check("location correlation rho", cov.rho, 1.0 / math.sqrt(5.0), 1e-12),
        _check("location sigma_x", cov.sigma_x, s / math.sqrt(2.0), 1e-12 * s),
        _check("location sigma_y", cov.sigma_y, s * math.sqrt(2.5), 1e-12 * s),
    ]


def run_all_checks(make_scenario: ScenarioFactory, n_alice_values: List[int], taus: List[float],
                   n_trials: int, rng: RngSpec, workers: int = 1, quick: bool = False) -> List[CheckResult]:
    checks: List[CheckResult] = []
    checks += structural_checks(100, rng.with_stream(config.STREAM_VALIDATION).generator(0))
    checks += special_function_checks()
    checks += worked_outage_checks()
    checks += fisher_checks()
    checks += monte_carlo_checks(make_scenario, n_alice_values, taus, n_trials, rng, workers)
    checks += optimality_checks(make_scenario, 3 if quick else 20,
                                10_000 if quick else config.DEFAULT_ORACLE_SAMPLES, rng)
    for check in checks:
        if check.passed:
            logger.debug(f"✅ {check.name}")
        else:
            logger.error(f"❌ {check.name}: {check.detail}")
    return checks

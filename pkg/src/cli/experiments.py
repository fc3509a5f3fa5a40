"""
📡 Wiretap LBB - Experiment Runners
===================================

One runner per experiment. Each takes a resolved ExperimentConfig and returns
a CsvReport whose footer embeds that configuration, so ``rerun`` can rebuild
the report from the file alone.

* sweep_tau    secrecy outage versus τ, one column per array size
* optimize     optimal τ and minimum outage per array size
* sweep_snr    optimal outage versus Bob's mean SNR
* uncertainty  outage averaged over TDOA location uncertainty
* fisher       Fisher matrix and location covariance per timing accuracy
* validate     the validation suite as a table
"""

import logging
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from src.beamforming.family import build_family, build_family_batch, combine
from src.channel.fading import eve_los_direction, sample_main_channel
from src.cli.config_loader import ExperimentConfig
from src.cli.csv_report import CsvReport, make_footer
from src.cli.validation import CheckResult, run_all_checks
from src.localization.tdoa import location_covariance, tdoa_fisher
from src.localization.uncertainty import averaged_outage_curve, unknown_location_curve
from src.model.scenario import Scenario
from src.montecarlo.oracles import EmpiricalEstimate, empirical_outage
from src.montecarlo.rng import RngSpec
from src.optimize.tau_search import (
    TauCurve,
    average_curve_over_main_channel,
    main_channel_pool,
    optimal_tau,
    optimal_tau_of_average,
    optimal_tau_of_model,
    pool_model,
    random_search_oracle,
    sweep_tau,
    tau_grid,
)
from src.utils import config
from src.utils.error_monitor import DegeneracyMonitor

logger = logging.getLogger(__name__)


def _new_report(cfg: ExperimentConfig, columns: List[Tuple[str, str]]) -> CsvReport:
    name = cfg.experiment.name
    return CsvReport(experiment=name, columns=columns,
                     footer=make_footer(name, cfg.seed, cfg.model_dump_json(exclude={"experiment": {"workers"}})))


def _sigma_label(range_sigma: float) -> str:
    return f"cs{range_sigma:g}m".replace(".", "p")


def _single_h(cfg: ExperimentConfig, scenario: Scenario):
    seed = cfg.experiment.single_h_seed
    return sample_main_channel(scenario, RngSpec(seed, config.STREAM_MAIN_CHANNEL).generator(0))


def _validate_rows(taus: np.ndarray, validate_taus: List[float]) -> Dict[int, float]:
    """Grid row index for each requested validation τ (nearest grid point)."""
    rows = {}
    for tau in validate_taus:
        index = int(round(tau * (taus.size - 1)))
        rows[index] = float(taus[index])
    return rows


def _empirical_single(cfg: ExperimentConfig, scenario: Scenario, h, tau: float, rng: RngSpec) -> EmpiricalEstimate:
    family = build_family(h, eve_los_direction(scenario))
    return empirical_outage(scenario, h, combine(family, tau), cfg.n_trials, rng, cfg.workers)


def _empirical_pooled(cfg: ExperimentConfig, scenario: Scenario, pool: np.ndarray, tau: float,
                      rng: RngSpec) -> EmpiricalEstimate:
    batch = build_family_batch(pool, eve_los_direction(scenario))
    valid = batch.valid
    w = np.sqrt(tau) * batch.w_zf[valid] + np.sqrt(1.0 - tau) * batch.w_zf_perp[valid]
    return empirical_outage(scenario, pool[valid], w, cfg.n_trials, rng, cfg.workers)


def run_sweep_tau(cfg: ExperimentConfig) -> CsvReport:
    exp = cfg.experiment
    rng = RngSpec(cfg.seed, config.STREAM_MAIN_CHANNEL)
    taus = tau_grid(exp.grid_size)
    averaging = exp.single_h_seed is None
    validate_rows = _validate_rows(taus, exp.validate_taus) if exp.validate_empirical else {}

    columns: List[Tuple[str, str]] = [("tau", "1")]
    series: List[List[Optional[np.ndarray]]] = []
    for n_alice in cfg.n_alice_values:
        columns.append((f"analytic_sop_na{n_alice}", "prob"))
        if averaging:
            columns.append((f"analytic_se_na{n_alice}", "prob"))
        if exp.validate_empirical:
            columns += [(f"empirical_sop_na{n_alice}", "prob"), (f"empirical_se_na{n_alice}", "prob")]

    for n_alice in cfg.n_alice_values:
        scenario = cfg.build_scenario(n_alice)
        logger.info(f"🚀 sweep_tau N_A={n_alice}: grid={exp.grid_size}, "
                    f"{'averaged over ' + str(exp.n_realizations) + ' draws' if averaging else 'single draw'}")
        if averaging:
            curve = average_curve_over_main_channel(scenario, exp.n_realizations, exp.grid_size, rng, cfg.workers)
            pool = main_channel_pool(scenario, exp.n_realizations, rng) if validate_rows else None
            h = None
        else:
            h = _single_h(cfg, scenario)
            curve = sweep_tau(scenario, h, exp.grid_size, mrt_fallback=exp.mrt_fallback)
            pool = None
        logger.info(f"   min SOP {curve.min_outage:.6g} at tau={curve.argmin_tau:.4f}")

        empirical_value = np.full(taus.size, np.nan)
        empirical_se = np.full(taus.size, np.nan)
        for index, tau in validate_rows.items():
            if averaging:
                estimate = _empirical_pooled(cfg, scenario, pool, tau, rng)
            else:
                estimate = _empirical_single(cfg, scenario, h, tau, rng)
            empirical_value[index] = estimate.value
            empirical_se[index] = estimate.std_error
            if not estimate.agrees_with(float(curve.outage[index])):
                logger.warning(f"⚠️ N_A={n_alice}, tau={tau:g}: empirical {estimate.value:.5f} vs "
                               f"analytic {curve.outage[index]:.5f}")
        entry: List[Optional[np.ndarray]] = [curve.outage]
        if averaging:
            entry.append(curve.std_error)
        if exp.validate_empirical:
            entry += [empirical_value, empirical_se]
        series.append(entry)

    report = _new_report(cfg, columns)
    for row, tau in enumerate(taus):
        cells: List[Optional[float]] = [float(tau)]
        for entry in series:
            for values in entry:
                value = float(values[row])
                cells.append(None if np.isnan(value) else value)
        report.add_row(cells)
    return report


def run_optimize(cfg: ExperimentConfig) -> CsvReport:
    exp = cfg.experiment
    rng = RngSpec(cfg.seed, config.STREAM_MAIN_CHANNEL)
    report = _new_report(cfg, [
        ("n_alice", "1"), ("mean_tau_star", "1"), ("mean_min_sop", "prob"), ("min_sop_se", "prob"),
        ("tau_star_of_average", "1"), ("min_of_average", "prob"),
    ])
    for n_alice in cfg.n_alice_values:
        scenario = cfg.build_scenario(n_alice)
        if exp.single_h_seed is None:
            monitor = DegeneracyMonitor({"degenerate_main_channel": config.MAX_DEGENERATE_FRACTION})
            model = pool_model(scenario, main_channel_pool(scenario, exp.n_realizations, rng), monitor)
            monitor.check()
        else:
            model = pool_model(scenario, np.atleast_2d(_single_h(cfg, scenario).h))
        tau_star, minima = optimal_tau_of_model(model, exp.coarse_grid, exp.refine_iters)
        avg_tau, avg_min = optimal_tau_of_average(model, exp.coarse_grid, exp.refine_iters)
        se = float(np.std(minima, ddof=1) / np.sqrt(minima.size)) if minima.size > 1 else 0.0
        logger.info(f"🎯 N_A={n_alice}: mean tau*={tau_star.mean():.4f}, mean min SOP={minima.mean():.6g}")
        report.add_row([n_alice, float(tau_star.mean()), float(minima.mean()), se, avg_tau, avg_min])
    return report


def _oracle_means(cfg: ExperimentConfig, scenario: Scenario, pool: np.ndarray, snr_index: int) -> Tuple[float, float]:
    """(mean family optimum, mean random-search minimum) over the first oracle draws of the pool."""
    exp = cfg.experiment
    oracle_rng = RngSpec(cfg.seed, config.STREAM_ORACLE)
    family_values, oracle_values = [], []
    for row in range(min(exp.oracle_realizations, pool.shape[0])):
        _, family_min = optimal_tau(scenario, pool[row], exp.coarse_grid, exp.refine_iters)
        generator = oracle_rng.generator(scenario.n_alice, snr_index, row)
        family_values.append(family_min)
        oracle_values.append(random_search_oracle(scenario, pool[row], exp.oracle_samples, generator))
    return float(np.mean(family_values)), float(np.mean(oracle_values))


def run_sweep_snr(cfg: ExperimentConfig) -> CsvReport:
    """Per-draw optimum averaged over a main-channel pool shared by every SNR point."""
    exp = cfg.experiment
    rng = RngSpec(cfg.seed, config.STREAM_MAIN_CHANNEL)
    with_oracle = exp.oracle_samples > 0
    columns = [("mean_snr_bob_db", "dB")]
    for n_alice in cfg.n_alice_values:
        columns += [(f"optimal_tau_na{n_alice}", "1"), (f"min_sop_na{n_alice}", "prob")]
        if with_oracle and n_alice <= exp.oracle_max_n_alice:
            columns += [(f"oracle_family_sop_na{n_alice}", "prob"), (f"oracle_sop_na{n_alice}", "prob")]
    report = _new_report(cfg, columns)

    pools = {}
    for n_alice in cfg.n_alice_values:
        scenario = cfg.build_scenario(n_alice)
        pools[n_alice] = (main_channel_pool(scenario, 1, RngSpec(exp.single_h_seed, config.STREAM_MAIN_CHANNEL))
                          if exp.single_h_seed is not None
                          else main_channel_pool(scenario, exp.n_realizations, rng))

    for snr_index, snr_db in enumerate(exp.mean_snr_bob_db_values):
        cells: List[Optional[float]] = [snr_db]
        for n_alice in cfg.n_alice_values:
            scenario = cfg.build_scenario(n_alice, mean_snr_bob_db=snr_db)
            monitor = DegeneracyMonitor({"degenerate_main_channel": config.MAX_DEGENERATE_FRACTION})
            model = pool_model(scenario, pools[n_alice], monitor)
            monitor.check()
            tau_star, minima = optimal_tau_of_model(model, exp.coarse_grid, exp.refine_iters)
            cells += [float(tau_star.mean()), float(minima.mean())]
            if with_oracle and n_alice <= exp.oracle_max_n_alice:
                cells += list(_oracle_means(cfg, scenario, pools[n_alice], snr_index))
        logger.info(f"📶 mean SNR at Bob {snr_db:g} dB done")
        report.add_row(cells)
    return report


def run_uncertainty(cfg: ExperimentConfig) -> CsvReport:
    exp = cfg.experiment
    rng = RngSpec(cfg.seed, config.STREAM_LOCATION)
    scenario = cfg.build_scenario()
    true_eve = cfg.true_eve()
    taus = tau_grid(exp.grid_size)

    columns = [("tau", "1")]
    curves: List[TauCurve] = []
    for range_sigma in exp.range_sigma_m_values:
        label = _sigma_label(range_sigma)
        anchors = cfg.build_anchors(range_sigma)
        logger.info(f"🚀 uncertainty c*sigma_t={range_sigma:g} m: {exp.n_location_samples} locations, "
                    f"{exp.n_realizations} draws each")
        curves.append(averaged_outage_curve(
            scenario, anchors, true_eve, exp.grid_size, exp.n_location_samples, exp.n_realizations, rng,
            fix_main_channel=exp.fix_main_channel, workers=cfg.workers))
        columns += [(f"averaged_sop_{label}", "prob"), (f"averaged_se_{label}", "prob")]
        if exp.diagnostic_true_location:
            curves.append(averaged_outage_curve(
                scenario, anchors, true_eve, exp.grid_size, exp.n_location_samples, exp.n_realizations, rng,
                fix_main_channel=exp.fix_main_channel, evaluate_at_true_location=True, workers=cfg.workers))
            columns += [(f"true_location_sop_{label}", "prob"), (f"true_location_se_{label}", "prob")]
    if exp.unknown_location_reference:
        curves.append(unknown_location_curve(scenario, exp.grid_size, exp.n_location_samples,
                                             exp.n_realizations, rng, cfg.workers))
        columns += [("unknown_location_sop", "prob"), ("unknown_location_se", "prob")]

    report = _new_report(cfg, columns)
    for row, tau in enumerate(taus):
        cells: List[Optional[float]] = [float(tau)]
        for curve in curves:
            cells += [float(curve.outage[row]), float(curve.std_error[row])]
        report.add_row(cells)
    return report


def run_fisher(cfg: ExperimentConfig) -> CsvReport:
    exp = cfg.experiment
    true_eve = cfg.true_eve()
    report = _new_report(cfg, [
        ("range_sigma_m", "m"), ("j11", "1/m^2"), ("j12", "1/m^2"), ("j22", "1/m^2"),
        ("sigma_x_m", "m"), ("sigma_y_m", "m"), ("rho", "1"),
    ])
    for range_sigma in exp.range_sigma_m_values:
        if range_sigma == 0.0:
            # a perfect fix has no finite Fisher matrix
            report.add_row([0.0, None, None, None, 0.0, 0.0, None])
            continue
        j = tdoa_fisher(cfg.build_anchors(range_sigma), true_eve)
        cov = location_covariance(j)
        report.add_row([range_sigma, j.j11, j.j12, j.j22, cov.sigma_x, cov.sigma_y, cov.rho])
    return report


def run_validate(cfg: ExperimentConfig) -> Tuple[CsvReport, List[CheckResult]]:
    exp = cfg.experiment
    rng = RngSpec(cfg.seed, config.STREAM_VALIDATION)
    logger.info(f"🧪 validation: {cfg.n_trials} trials per Monte Carlo point, array sizes {cfg.n_alice_values}")
    checks = run_all_checks(lambda n_alice: cfg.build_scenario(n_alice), cfg.n_alice_values, exp.validate_taus,
                            cfg.n_trials, rng, cfg.workers, quick=exp.quick)
    report = _new_report(cfg, [("check", "text"), ("passed", "bool"), ("observed", "1"),
                               ("expected", "1"), ("tolerance", "1")])
    for check in checks:
        report.add_row([check.name, 1.0 if check.passed else 0.0, check.observed, check.expected, check.tolerance])
    return report, checks


RUNNERS: Dict[str, Callable[[ExperimentConfig], CsvReport]] = {
    "sweep_tau": run_sweep_tau,
    "optimize": run_optimize,
    "sweep_snr": run_sweep_snr,
    "uncertainty": run_uncertainty,
    "fisher": run_fisher,
}

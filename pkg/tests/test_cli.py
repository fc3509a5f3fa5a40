import math
import sys
from pathlib import Path

sys.path.append(".")

import numpy as np
import pytest
from dotenv import load_dotenv

load_dotenv()

from src.cli import experiments
from src.cli.config_loader import apply_overrides, env_overrides, load_config, parse_config
from src.cli.csv_report import CsvReport, footer_config, make_footer, parse_report, read_report
from src.cli.experiments import run_fisher, run_optimize, run_sweep_snr, run_uncertainty
from src.cli.main import main
from src.cli.plot_script import emit_plot_script
from src.cli.validation import (
    CheckResult,
    fisher_checks,
    monte_carlo_checks,
    special_function_checks,
    structural_checks,
    worked_outage_checks,
)
from src.montecarlo.rng import RngSpec
from src.utils import config
from src.utils.errors import ConfigError

DIRECT = """
[experiment]
seed = 11
grid_size = 11
n_realizations = 20
n_alice_values = [2, 3]
coarse_grid = 11
refine_iters = 20
mean_snr_bob_db_values = [0.0, 10.0, 20.0]

[scenario]
n_eve = 2
k_bob_db = 10.0
k_eve_db = 5.0
mean_snr_bob_db = 10.0
mean_snr_eve_db = 10.0
theta_b_deg = 60.0
theta_e_deg = 45.0
"""

GEOMETRY = """
[experiment]
seed = 12
grid_size = 11
n_realizations = 5
n_location_samples = 3
range_sigma_m_values = [0.0, 100.0]

[scenario]
n_alice = 3

[geometry]
bob_m = [1225.0, 707.0]
eve_m = [1000.0, -1000.0]
path_loss_exponent = 4.0
target_mean_snr_bob_db = 10.0
target_mean_snr_eve_db = 10.0
"""


def _write(tmp_path: Path, text: str, name: str = "scenario.toml") -> Path:
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def _resolved(tmp_path: Path, text: str, name: str):
    return apply_overrides(load_config(_write(tmp_path, text)), {"name": name})


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    monkeypatch.delenv(config.ENV_SEED, raising=False)
    monkeypatch.delenv(config.ENV_WORKERS, raising=False)


def test_documented_scenarios_load():
    for path in sorted(Path("docs").glob("*.toml")):
        cfg = load_config(path)
        assert cfg.build_scenario().n_alice >= 2


def test_sweep_tau_report_and_byte_identical_rerun(tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["sweep_tau", "--config", str(_write(tmp_path, DIRECT)), "--out", str(out)]) == 0
    report = read_report(out)
    assert report.column_names == ["tau", "analytic_sop_na2", "analytic_se_na2", "analytic_sop_na3", "analytic_se_na3"]
    assert len(report.rows) == 11
    assert report.footer["seed"] == "11"
    assert report.footer["experiment"] == "sweep_tau"
    assert all(0.0 <= v <= 1.0 for v in report.column("analytic_sop_na3"))

    again = tmp_path / "again.csv"
    assert main(["rerun", str(out), "--out", str(again), "--workers", "3"]) == 0
    assert again.read_bytes() == out.read_bytes()


def test_validated_sweep_leaves_unvalidated_rows_blank(tmp_path):
    out = tmp_path / "sweep.csv"
    code = main(["sweep_tau", "--config", str(_write(tmp_path, DIRECT)), "--out", str(out),
                 "--validate", "--trials", "3000"])
    assert code == 0
    report = read_report(out)
    empirical = report.column("empirical_sop_na2")
    assert empirical[0] is not None
    assert empirical[1] is None
    assert empirical[10] is not None


def test_plot_script_for_a_report(tmp_path):
    out = tmp_path / "sweep.csv"
    main(["sweep_tau", "--config", str(_write(tmp_path, DIRECT)), "--out", str(out), "--plot"])
    script = (tmp_path / "sweep.gp").read_text(encoding="utf-8")
    assert '"sweep.csv" using 1:2' in script
    assert "set logscale y" in script
    assert "analytic_se" not in script
    assert main(["plot", str(out)]) == 0


def test_plot_script_needs_matching_columns():
    report = CsvReport("sweep_tau", [("tau", "1"), ("other", "1")])
    with pytest.raises(ConfigError):
        emit_plot_script(report, "x.csv")
    with pytest.raises(ConfigError):
        emit_plot_script(CsvReport("validate", [("check", "text")]), "x.csv")


def test_optimize_report(tmp_path):
    report = run_optimize(_resolved(tmp_path, DIRECT, "optimize"))
    assert report.column("n_alice") == [2.0, 3.0]
    for tau in report.column("mean_tau_star"):
        assert 0.0 <= tau <= 1.0


def test_sweep_snr_minimum_falls_with_bob_snr(tmp_path):
    report = run_sweep_snr(_resolved(tmp_path, DIRECT, "sweep_snr"))
    assert report.column("mean_snr_bob_db") == [0.0, 10.0, 20.0]
    minima = report.column("min_sop_na3")
    assert minima[0] >= minima[1] >= minima[2]


def test_sweep_snr_oracle_columns(tmp_path):
    text = DIRECT.replace("coarse_grid = 11", "coarse_grid = 11\noracle_samples = 2000\noracle_realizations = 2")
    report = run_sweep_snr(_resolved(tmp_path, text, "sweep_snr"))
    assert "oracle_sop_na2" in report.column_names
    assert "oracle_sop_na3" in report.column_names
    for family, oracle in zip(report.column("oracle_family_sop_na2"), report.column("oracle_sop_na2")):
        assert family <= oracle + 1e-3


def test_uncertainty_report(tmp_path):
    report = run_uncertainty(_resolved(tmp_path, GEOMETRY, "uncertainty"))
    assert report.column_names == ["tau", "averaged_sop_cs0m", "averaged_se_cs0m",
                                   "averaged_sop_cs100m", "averaged_se_cs100m"]
    assert len(report.rows) == 11


def test_fisher_report(tmp_path):
    report = run_fisher(_resolved(tmp_path, GEOMETRY, "fisher"))
    first, second = report.rows
    assert first[1] is None and first[6] is None
    assert first[4] == 0.0
    assert second[4] > 0.0 and second[5] > 0.0
    assert -1.0 < second[6] < 1.0


def test_config_errors_exit_with_code_two(tmp_path):
    unknown_table = GEOMETRY + "\n[scenario_extra]\n"
    assert main(["sweep_tau", "--config", str(_write(tmp_path, unknown_table))]) == config.EXIT_CONFIG_ERROR
    assert main(["sweep_tau", "--config", str(tmp_path / "missing.toml")]) == config.EXIT_CONFIG_ERROR


def test_snr_modes_are_exclusive():
    base = {"scenario": {"mean_snr_bob_db": 10.0, "mean_snr_eve_db": 10.0, "theta_b_deg": 60.0, "theta_e_deg": 45.0}}
    parse_config(base)
    with pytest.raises(ConfigError):
        parse_config({**base, "geometry": {"bob_m": [1.0, 0.0], "eve_m": [0.0, 1.0], "path_loss_exponent": 2.0,
                                           "noise_bob_w": 1.0, "noise_eve_w": 1.0}})
    with pytest.raises(ConfigError):
        parse_config({"scenario": {"mean_snr_bob_db": 10.0}})


def test_angle_given_twice_is_rejected():
    data = {"scenario": {"mean_snr_bob_db": 10.0, "mean_snr_eve_db": 10.0, "theta_b_deg": 60.0,
                         "theta_b_rad": 1.0, "theta_e_deg": 45.0}}
    with pytest.raises(ConfigError):
        parse_config(data)


def test_unknown_key_names_the_field():
    with pytest.raises(ConfigError) as info:
        parse_config({"experiment": {"grid_sise": 3}})
    assert "grid_sise" in str(info.value)


def test_toml_syntax_error_reports_the_line(tmp_path):
    with pytest.raises(ConfigError) as info:
        load_config(_write(tmp_path, "[experiment]\nseed = = 3\n"))
    assert "line 2" in str(info.value)


def test_uncertainty_without_geometry_is_a_config_error(tmp_path):
    with pytest.raises(ConfigError):
        _resolved(tmp_path, DIRECT, "uncertainty")


def test_override_precedence(tmp_path, monkeypatch):
    without_seed = DIRECT.replace("seed = 11\n", "")
    monkeypatch.setenv(config.ENV_SEED, "5")
    monkeypatch.setenv(config.ENV_WORKERS, "2")
    environment = env_overrides()

    assert apply_overrides(load_config(_write(tmp_path, DIRECT)), {}, environment).seed == 11
    resolved = apply_overrides(load_config(_write(tmp_path, without_seed)), {}, environment)
    assert resolved.seed == 5
    assert resolved.workers == 2
    assert apply_overrides(load_config(_write(tmp_path, DIRECT)), {"seed": 9}, environment).seed == 9
    assert apply_overrides(load_config(_write(tmp_path, without_seed)), {}, {}).seed == config.DEFAULT_SEED


def test_invalid_environment_value(monkeypatch):
    monkeypatch.setenv(config.ENV_WORKERS, "many")
    with pytest.raises(ConfigError):
        env_overrides()


def test_quick_mode_caps_trials(tmp_path):
    cfg = apply_overrides(load_config(_write(tmp_path, DIRECT)), {"quick": True})
    assert cfg.n_trials == config.QUICK_TRIALS


def test_degenerate_geometry_exits_with_code_three(tmp_path):
    text = DIRECT.replace("k_bob_db = 10.0", "k_bob_db = inf").replace("theta_b_deg = 60.0", "theta_b_deg = 45.0")
    text = text.replace("seed = 11\n", "seed = 11\nsingle_h_seed = 3\n")
    assert main(["sweep_tau", "--config", str(_write(tmp_path, text))] + ["--out", str(tmp_path / "x.csv")]) \
        == config.EXIT_NUMERIC_ERROR


def test_failed_validation_exits_with_code_four(tmp_path, monkeypatch):
    monkeypatch.setattr(experiments, "run_all_checks",
                        lambda *args, **kwargs: [CheckResult("broken", False, 1.0, 0.0, 0.1, "too far")])
    out = tmp_path / "validate.csv"
    code = main(["validate", "--config", str(_write(tmp_path, DIRECT)), "--out", str(out)])
    assert code == config.EXIT_VALIDATION_FAILURE
    assert read_report(out).column("passed") == [0.0]


def test_passing_validation_writes_pdf(tmp_path, monkeypatch):
    monkeypatch.setattr(experiments, "run_all_checks",
                        lambda *args, **kwargs: [CheckResult("fine", True, 1.0, 1.0, 0.1)])
    pdf = tmp_path / "validation.pdf"
    code = main(["validate", "--config", str(_write(tmp_path, DIRECT)), "--out", str(tmp_path / "v.csv"),
                 "--report", str(pdf)])
    assert code == 0
    assert pdf.read_bytes().startswith(b"%PDF")


def test_deterministic_checks_pass():
    rng = np.random.default_rng(0)
    for check in structural_checks(100, rng) + special_function_checks() + worked_outage_checks() + fisher_checks():
        assert check.passed, f"{check.name}: {check.detail}"


def test_csv_cells_and_footer():
    report = CsvReport("fisher", [("range_sigma_m", "m"), ("rho", "1"), ("label", "text")],
                       footer=make_footer("fisher", 3, '{"a": 1}'))
    report.add_row([0.1, None, "x"])
    text = report.to_text()
    assert text.splitlines()[0] == "range_sigma_m[m],rho[1],label[text]"
    assert text.splitlines()[1] == "0.10000000000000001,,x"
    parsed = parse_report(text)
    assert parsed.rows == [[0.1, None, "x"]]
    assert footer_config(parsed) == '{"a": 1}'
    with pytest.raises(ValueError):
        report.add_row([1.0])
    with pytest.raises(ConfigError):
        footer_config(CsvReport("fisher", [("x", "1")]))
    assert math.isclose(float(parsed.footer["seed"]), 3.0)


def test_eve_cdf_check_allows_for_the_gamma_approximation(scenario_factory):
    n_trials = 400_000
    checks = monte_carlo_checks(scenario_factory, [2, 3, 4], [], n_trials,
                                RngSpec(config.DEFAULT_SEED, config.STREAM_VALIDATION), workers=2)
    cdf_checks = [check for check in checks if check.name.startswith("Eve SNR CDF")]
    assert len(cdf_checks) == 3
    for check in cdf_checks:
        assert check.passed, f"{check.name}: {check.detail}"
        assert check.expected == config.EVE_CDF_APPROXIMATION_FLOOR
        # the gap is the approximation itself, well outside the sampling band
        assert check.observed > 1.63 / math.sqrt(n_trials)


def test_infinite_eve_k_factor_is_a_config_error(tmp_path):
    text = DIRECT.replace("k_eve_db = 5.0", "k_eve_db = inf")
    with pytest.raises(ConfigError) as info:
        parse_config({"scenario": {"k_eve_db": math.inf}})
    assert "k_eve_db" in str(info.value)
    assert main(["sweep_tau", "--config", str(_write(tmp_path, text)), "--out", str(tmp_path / "x.csv")]) \
        == config.EXIT_CONFIG_ERROR


def test_documented_uncertainty_minimum_grows_with_range_error():
    cfg = apply_overrides(load_config(Path("docs/uncertainty.toml")), {"name": "uncertainty", "workers": 4})
    report = run_uncertainty(cfg)
    minima = [min(report.column(f"averaged_sop_{label}")) for label in ("cs0m", "cs50m", "cs200m", "cs800m")]
    assert all(later >= earlier for earlier, later in zip(minima, minima[1:])), minima

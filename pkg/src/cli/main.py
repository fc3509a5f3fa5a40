"""
📡 Wiretap LBB - Command Line
=============================

``wiretap-lbb <subcommand> --config scenario.toml [options]``

Subcommands run one experiment each (``sweep_tau``, ``optimize``,
``sweep_snr``, ``uncertainty``, ``fisher``, ``validate``), regenerate a report
from its footer (``rerun``) or emit a gnuplot script for a report (``plot``).
Exit codes: 0 success, 2 configuration error, 3 numeric or degeneracy error,
4 validation failure.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from src.cli.config_loader import ExperimentConfig, apply_overrides, env_overrides, load_config, parse_config_json
from src.cli.csv_report import CsvReport, footer_config, read_report
from src.cli.experiments import RUNNERS, run_validate
from src.cli.plot_script import write_plot_script
from src.utils import config
from src.utils.errors import ValidationFailure, describe_error, log_error_report
from src.utils.pdf_report_generator import PDFReportGenerator

logger = logging.getLogger(__name__)

EXPERIMENTS = ["sweep_tau", "optimize", "sweep_snr", "uncertainty", "validate", "fisher"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=config.ARTIFACT_NAME,
        description="Location-based beamforming for Rician wiretap channels",
    )
    parser.add_argument("--log-level", type=str, default=None,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Logging level (stderr)")
    subparsers = parser.add_subparsers(dest="command", required=True)

    for name in EXPERIMENTS:
        sub = subparsers.add_parser(name, help=config.EXPERIMENT_DISPLAY_NAMES[name])
        sub.add_argument("--config", type=Path, required=True, help="TOML scenario file")
        sub.add_argument("--seed", type=int, default=None, help="Master seed")
        sub.add_argument("--trials", type=int, default=None, help="Monte Carlo trials per point")
        sub.add_argument("--grid", type=int, default=None, help="Number of tau grid points")
        sub.add_argument("--workers", type=int, default=None, help="Worker threads")
        sub.add_argument("--out", type=Path, default=None, help="CSV output path")
        sub.add_argument("--validate", action="store_true", help="Add Monte Carlo columns (sweep_tau)")
        sub.add_argument("--quick", action="store_true", help=f"Use {config.QUICK_TRIALS} trials")
        sub.add_argument("--plot", action="store_true", help="Also write a gnuplot script next to the CSV")
        if name == "validate":
            sub.add_argument("--report", type=Path, default=None, help="Write a PDF validation report")

    rerun = subparsers.add_parser("rerun", help="Regenerate a report from its footer")
    rerun.add_argument("report", type=Path, help="CSV report to regenerate")
    rerun.add_argument("--out", type=Path, default=None, help="Output path (default: overwrite the report)")
    rerun.add_argument("--workers", type=int, default=None, help="Worker threads")

    plot = subparsers.add_parser("plot", help="Write a gnuplot script for a report")
    plot.add_argument("report", type=Path, help="CSV report to plot")
    return parser


def _cli_overrides(args: argparse.Namespace, name: str) -> dict:
    return {
        "name": name,
        "seed": args.seed,
        "n_trials": args.trials,
        "grid_size": args.grid,
        "workers": args.workers,
        "validate_empirical": True if args.validate else None,
        "quick": True if args.quick else None,
    }


def _default_out(name: str) -> Path:
    return Path(f"{name}.csv")


def _print_summary(report: CsvReport, path: Path) -> None:
    print(f"✅ {config.EXPERIMENT_DISPLAY_NAMES.get(report.experiment, report.experiment)}")
    print(f"   {len(report.rows)} rows, {len(report.columns)} columns -> {path}")


def run_experiment(cfg: ExperimentConfig, out: Path, plot: bool = False, pdf: Optional[Path] = None) -> int:
    name = cfg.experiment.name
    logger.info(f"🚀 {name}: seed={cfg.seed}, workers={cfg.workers}")
    if name == "validate":
        report, checks = run_validate(cfg)
        report.write(out)
        if pdf is not None:
            PDFReportGenerator(output_dir=str(out.parent)).generate_report(
                checks, {"Seed": str(cfg.seed), "Trials per point": str(cfg.n_trials),
                         "Array sizes": ", ".join(str(n) for n in cfg.n_alice_values)}, str(pdf))
        failed = [check for check in checks if not check.passed]
        print(f"{'❌' if failed else '✅'} validation: {len(checks) - len(failed)}/{len(checks)} checks passed")
        for check in failed:
            print(f"   FAIL {check.name}: {check.detail}")
        if failed:
            raise ValidationFailure(f"{len(failed)} validation check(s) failed",
                                    context={"failed": [check.name for check in failed]})
        return config.EXIT_OK

    report = RUNNERS[name](cfg)
    report.write(out)
    if plot:
        write_plot_script(report, out)
    _print_summary(report, out)
    return config.EXIT_OK


def _run(args: argparse.Namespace) -> int:
    if args.command == "plot":
        report = read_report(args.report)
        script = write_plot_script(report, args.report)
        print(f"📈 {script}")
        return config.EXIT_OK

    if args.command == "rerun":
        report = read_report(args.report)
        cfg = parse_config_json(footer_config(report, str(args.report)), str(args.report))
        if args.workers is not None:
            cfg = apply_overrides(cfg, {"workers": args.workers})
        return run_experiment(cfg, args.out or args.report)

    cfg = apply_overrides(load_config(args.config), _cli_overrides(args, args.command), env_overrides())
    out = args.out or _default_out(args.command)
    return run_experiment(cfg, out, plot=args.plot, pdf=getattr(args, "report", None))


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.log_level:
        logging.getLogger().setLevel(args.log_level)
    try:
        return _run(args)
    except Exception as error:
        report = describe_error(error)
        log_error_report(report)
        print(f"❌ {report.error_type}: {report.error_message}", file=sys.stderr)
        return report.exit_code

"""
Gnuplot script emission for CSV reports.

The script references the CSV by relative path and selects columns by index,
so it runs from the report's directory without edits.
"""

import logging
from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple

from src.cli.csv_report import CsvReport
from src.utils.errors import ConfigError

logger = logging.getLogger(__name__)

PlotStyle = Literal["tau", "snr", "fisher"]

# style -> (x column, x label, y label, log-scale y)
_STYLES: Dict[str, Tuple[str, str, str, bool]] = {
    "tau": ("tau", "tau", "secrecy outage probability", True),
    "snr": ("mean_snr_bob_db", "mean SNR at Bob (dB)", "optimal secrecy outage probability", True),
    "fisher": ("range_sigma_m", "c * sigma_t (m)", "location standard deviation (m)", False),
}

_EXPERIMENT_STYLES = {
    "sweep_tau": ("tau", "analytic_sop_"),
    "uncertainty": ("tau", "averaged_sop_"),
    "sweep_snr": ("snr", "min_sop_"),
    "fisher": ("fisher", "sigma_"),
}

_SCRIPT_TEMPLATE = """\
# gnuplot script for %(csv)s (%(experiment)s)
set datafile separator ","
set datafile commentschars "#"
set key outside right autotitle columnhead
set grid
set xlabel "%(xlabel)s"
set ylabel "%(ylabel)s"
%(logscale)sset terminal pngcairo size 900,600
set output "%(png)s"
plot %(series)s
"""


def style_for(report: CsvReport) -> Tuple[PlotStyle, str]:
    if report.experiment not in _EXPERIMENT_STYLES:
        raise ConfigError(f"no plot style for experiment {report.experiment!r}",
                          context={"supported": sorted(_EXPERIMENT_STYLES)})
    return _EXPERIMENT_STYLES[report.experiment]


def emit_plot_script(report: CsvReport, csv_name: str, style: Optional[PlotStyle] = None,
                     prefix: Optional[str] = None) -> str:
    """A self-contained gnuplot script plotting one line per matching column."""
    if style is None or prefix is None:
        default_style, default_prefix = style_for(report)
        style = style or default_style
        prefix = default_prefix if prefix is None else prefix
    x_name, xlabel, ylabel, log_y = _STYLES[style]
    names = report.column_names
    if x_name not in names:
        raise ConfigError(f"report has no {x_name!r} column for a {style} plot",
                          context={"columns": names})
    series_columns: List[int] = [i for i, name in enumerate(names) if name.startswith(prefix) and name != x_name]
    if not series_columns:
        raise ConfigError(f"report has no columns starting with {prefix!r} to plot",
                          context={"columns": names})
    x_index = names.index(x_name) + 1
    csv_path = Path(csv_name).name
    series = ", \\\n     ".join(
        f'"{csv_path}" using {x_index}:{i + 1} with lines lw 2 title "{names[i]}"' for i in series_columns
    )
    return _SCRIPT_TEMPLATE % {
        "csv": csv_path,
        "experiment": report.experiment,
        "xlabel": xlabel,
        "ylabel": ylabel,
        "logscale": "set logscale y\n" if log_y else "",
        "png": Path(csv_path).with_suffix(".png").name,
        "series": series,
    }


def write_plot_script(report: CsvReport, csv_path: Path, style: Optional[PlotStyle] = None) -> Path:
    csv_path = Path(csv_path)
    script_path = csv_path.with_suffix(".gp")
    script_path.write_text(emit_plot_script(report, csv_path.name, style), encoding="utf-8")
    logger.info(f"📈 wrote plot script {script_path}")
    return script_path

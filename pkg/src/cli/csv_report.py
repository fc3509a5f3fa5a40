"""
📡 Wiretap LBB - CSV Reports
============================

Self-describing CSV output. The header names every column with its unit as
``name[unit]``; numbers carry 17 significant digits; blank cells mark values
that were not computed. Footer comment lines record the artifact version, the
experiment, the seed and the full resolved configuration as JSON, so a report
alone is enough to regenerate it. No timestamps are written.
"""

import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Sequence, Tuple, Union

from src.utils import config
from src.utils.errors import ConfigError

logger = logging.getLogger(__name__)

Cell = Union[float, str, None]  # text cells carry labels such as check names


@dataclass
class CsvReport:
    experiment: str
    columns: List[Tuple[str, str]]  # (name, unit)
    rows: List[List[Cell]] = field(default_factory=list)
    footer: Dict[str, str] = field(default_factory=dict)

    @property
    def column_names(self) -> List[str]:
        return [name for name, _ in self.columns]

    def add_row(self, values: Sequence[Cell]) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} cells, report has {len(self.columns)} columns")
        self.rows.append([v if v is None or isinstance(v, str) else float(v) for v in values])

    def column(self, name: str) -> List[Cell]:
        try:
            index = self.column_names.index(name)
        except ValueError:
            raise KeyError(f"report has no column {name!r}; columns: {', '.join(self.column_names)}") from None
        return [row[index] for row in self.rows]

    def to_text(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow([f"{name}[{unit}]" for name, unit in self.columns])
        for row in self.rows:
            writer.writerow([_format_cell(v) for v in row])
        for key, value in self.footer.items():
            buffer.write(f"{config.CSV_FOOTER_PREFIX}{key}: {value}\n")
        return buffer.getvalue()

    def write(self, path: Path) -> Path:
        path = Path(path)
        if not path.parent.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(self.to_text())
        logger.info(f"📄 wrote {len(self.rows)} rows to {path}")
        return path


def format_float(value: float) -> str:
    if math.isnan(value):
        return "nan"
    return config.CSV_FLOAT_FORMAT.format(value)


def _format_cell(value: Cell) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    return format_float(value)


def _parse_cell(cell: str) -> Cell:
    if cell == "":
        return None
    try:
        return float(cell)
    except ValueError:
        return cell


def make_footer(experiment: str, seed: int, config_json: str) -> Dict[str, str]:
    return {
        "artifact": f"{config.ARTIFACT_NAME} {config.ARTIFACT_VERSION}",
        "experiment": experiment,
        "seed": str(seed),
        "config": config_json,
    }


def _parse_header(cell: str) -> Tuple[str, str]:
    if cell.endswith("]") and "[" in cell:
        name, unit = cell[:-1].split("[", 1)
        return name, unit
    return cell, ""


def parse_report(text: str, source: str = "<text>") -> CsvReport:
    lines = text.splitlines()
    body = [line for line in lines if not line.startswith(config.CSV_FOOTER_PREFIX.rstrip())]
    footer: Dict[str, str] = {}
    for line in lines:
        if line.startswith(config.CSV_FOOTER_PREFIX):
            key, _, value = line[len(config.CSV_FOOTER_PREFIX):].partition(": ")
            footer[key] = value
    if not body:
        raise ConfigError(f"{source}: report has no header row", context={"source": source})
    reader = csv.reader(body)
    columns = [_parse_header(cell) for cell in next(reader)]
    report = CsvReport(experiment=footer.get("experiment", ""), columns=columns, footer=footer)
    for row in reader:
        report.rows.append([_parse_cell(cell) for cell in row])
    return report


def read_report(path: Path) -> CsvReport:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError as error:
        raise ConfigError(f"report not found: {path}", context={"path": str(path)}) from error
    return parse_report(text, str(path))


def footer_config(report: CsvReport, source: str = "<report>") -> str:
    """The JSON configuration embedded in a report footer."""
    raw = report.footer.get("config")
    if raw is None:
        raise ConfigError(f"{source}: footer has no config line; it cannot be rerun",
                          context={"footer_keys": list(report.footer)})
    try:
        json.loads(raw)
    except json.JSONDecodeError as error:
        raise ConfigError(f"{source}: footer config is not valid JSON: {error}") from error
    return raw

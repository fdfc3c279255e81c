from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from jinja2 import Environment, StrictUndefined

from thermal_qfi.errors import DomainError
from thermal_qfi.types import CSV_FIELDS, OrderingReport, SweepRow
from thermal_qfi.utils.io import PathLike, ensure_dir, read_text, write_json, write_text_atomic

from .presets import ScenarioPreset

_FLOAT_FIELDS = ("tau", "qfi", "qfi_benchmark", "n_signal", "n_low", "t0", "omega1", "omega2", "g", "gprime")

_env = Environment(undefined=StrictUndefined, trim_blocks=True, lstrip_blocks=True, keep_trailing_newline=True)
_env.filters["boolstr"] = lambda b: "true" if b else "false"
_env.filters["num"] = lambda x: format(float(x), ".6g")

SUMMARY_TEMPLATE = _env.from_string(
    """scenario: {{ report.scenario }}
{% if preset is not none %}
parameters: n_signal={{ preset.n_signal | num }} n_low={{ preset.n_low | num }} t0={{ preset.t0 | num }} \
omega1={{ preset.omega1 | num }} omega2={{ preset.omega2 | num }} g={{ preset.g | num }} gprime={{ preset.gprime | num }}
{% endif %}
grid: {{ report.taus | length }} points, tau in [{{ report.taus[0] | num }}, {{ report.taus[-1] | num }}]
{% for key, value in report.flags.items() %}
{{ key }}: {{ value | boolstr }}
{% endfor %}
top curve: {{ report.top_curve if report.top_curve is not none else "none" }}
unconverged points: {{ report.unconverged | length }}
{% for curve, gap in report.max_relative_gap.items() %}
{{ curve }}: max relative gap {{ gap | num }}, beats everywhere {{ report.beats_everywhere[curve] | boolstr }}, \
beats nowhere {{ report.beats_nowhere[curve] | boolstr }}
{% endfor %}
{% for c in report.crossovers %}
crossover: {{ c.curve }} between tau={{ c.tau_before | num }} and tau={{ c.tau_after | num }} \
(beats after: {{ c.beats_after | boolstr }})
{% endfor %}
"""
)


def _fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return format(float(value), ".12g")
    return str(value)


def sweep_csv_text(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for r in rows:
        writer.writerow([_fmt(getattr(r, k)) for k in CSV_FIELDS])
    return buf.getvalue()


def write_sweep_csv(rows: Sequence[SweepRow], path: PathLike) -> int:
    """
    Header plus one line per row; numbers at 12 significant digits,
    booleans as true/false, a missing eta as an empty cell.
    """
    write_text_atomic(path, sweep_csv_text(rows))
    return len(rows)


def _parse_bool(s: str) -> bool:
    if s == "true":
        return True
    if s == "false":
        return False
    raise DomainError(f"Expected true/false, got {s!r}")


def read_sweep_csv(path: PathLike) -> List[SweepRow]:
    reader = csv.DictReader(io.StringIO(read_text(path)))
    if tuple(reader.fieldnames or ()) != CSV_FIELDS:
        raise DomainError(f"Unexpected CSV header: {reader.fieldnames}")
    rows: List[SweepRow] = []
    for line in reader:
        try:
            values: Dict[str, Any] = {k: float(line[k]) for k in _FLOAT_FIELDS}
        except ValueError as e:
            raise DomainError(f"Malformed number in {path}: {e}") from None
        values["eta"] = float(line["eta"]) if line["eta"] else None
        values["beats_benchmark"] = _parse_bool(line["beats_benchmark"])
        rows.append(SweepRow(scenario=line["scenario"], curve=line["curve"], **values))
    return rows


def render_summary(report: OrderingReport, preset: Optional[ScenarioPreset] = None) -> str:
    return SUMMARY_TEMPLATE.render(report=report, preset=preset)


def write_all_reports(
    out_dir: PathLike,
    rows: Sequence[SweepRow],
    report: OrderingReport,
    preset: Optional[ScenarioPreset] = None,
) -> Dict[str, str]:
    out = ensure_dir(Path(out_dir))
    csv_path = out / f"{report.scenario}.csv"
    report_path = out / f"{report.scenario}_report.json"
    summary_path = out / f"{report.scenario}_summary.txt"

    write_sweep_csv(rows, csv_path)
    write_json(report_path, report.to_dict())
    write_text_atomic(summary_path, render_summary(report, preset))

    return {"csv": str(csv_path), "report": str(report_path), "summary": str(summary_path)}
